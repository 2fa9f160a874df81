"""Average measurement entropy: random states, minima and the analytic bounds.

Every MUB set obeys the average bound (log2 d)/2. Product and Latin-square
sets reach it exactly, while a complete set of d+1 bases cannot go below
log2((d+1)/2).
"""

import numpy as np

from mubkit import latin_square_mubs, prime_mubs, product_mubs
from mubkit.entropy import batch_avg_entropies, average_bound, full_set_bound
from mubkit.linalg import random_state
from mubkit.uncertainty import certify_tightness, minimize_avg_entropy


def main():
    rng = np.random.default_rng(0)
    S = prime_mubs(5)
    states = np.stack([random_state(S.dim, rng) for _ in range(2000)], axis=1)
    shannon, renyi = batch_avg_entropies(S.unitaries(), states)
    print("prime d=5, 2000 random states")
    print(f"  smallest average Shannon entropy {shannon.min():.4f}")
    print(f"  smallest average Renyi-2 entropy {renyi.min():.4f}")
    print(f"  full-set bound log2(3)           {full_set_bound(5):.4f}")
    print(f"  pairwise bound (log2 5)/2        {average_bound(5):.4f}")

    print("\nminimum over states, compared with (log2 d)/2")
    cases = [
        ("prime d=3 (complete)", prime_mubs(3)),
        ("product of prime d=3, m=2", product_mubs(prime_mubs(3).subset([0, 1]))),
        ("product of prime d=3, m=4", product_mubs(prime_mubs(3))),
        ("latin s=3, m=4", latin_square_mubs(3)),
    ]
    for name, T in cases:
        res = minimize_avg_entropy(T, restarts=16, seed=0)
        cert = certify_tightness(T, res)
        verdict = "tight" if cert.tight else "not tight"
        witness = " (witness)" if res.witness_match else ""
        print(f"  {name:28s} min {cert.achieved:.6f}  bound {cert.lower_bound:.6f}  "
              f"{verdict}{witness}")


if __name__ == "__main__":
    main()
