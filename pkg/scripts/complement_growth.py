"""Print complement sizes of random UFAs against the n^(log2 n + 10) bound."""

import argparse
import math
import random

from unaryfa import complement_ufa
from unaryfa.bench import random_ufa


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--max-states", type=int, default=60)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print("n,complement_states,log_ratio")
    for _ in range(args.samples):
        c = random_ufa(rng, rng.randint(2, args.max_states))
        out = complement_ufa(c)
        n = c.num_states
        # exponent e with out = n^e, to compare against log2 n + 10
        ratio = math.log(out.num_states) / math.log(n) if n > 1 else 0.0
        print(f"{n},{out.num_states},{ratio:.3f}")


if __name__ == "__main__":
    main()
