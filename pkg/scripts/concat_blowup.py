"""Show the concatenation blow-up family: the complement of L(U)·L(H) is one
residue class whose modulus outgrows the input size."""

import argparse

from unaryfa import complement_ufa, concat_via_bits, gen_concat_blowup


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("m", type=int, nargs="*", default=[4, 5, 8, 9])
    args = ap.parse_args()
    print("m,input_states,primes,missing_class,complement_states")
    for m in args.m:
        u, h, meta = gen_concat_blowup(m)
        comp = complement_ufa(concat_via_bits(u, h))
        cls = meta.expected
        primes = " ".join(map(str, meta.primes))
        print(f"{m},{u.num_states + h.num_states},{primes},{cls.residue} mod {cls.modulus},{comp.num_states}")


if __name__ == "__main__":
    main()
