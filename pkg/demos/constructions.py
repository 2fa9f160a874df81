"""Build the MUB families and certify them.

Prints, for each family, the dimension, the number of bases and the largest
deviation of |<b|b'>|^2 from 1/d, then checks the 2-design property of the
complete prime sets.
"""

import numpy as np

from mubkit import (
    check_mub,
    latin_square_mubs,
    mols_prime,
    prime_mubs,
    product_mubs,
    qubit_triple,
    two_design_defect,
)


def main():
    sets = [
        ("prime d=5", prime_mubs(5)),
        ("qubit triple n=3", qubit_triple(3)),
        ("latin s=3", latin_square_mubs(3)),
        ("product of prime d=3", product_mubs(prime_mubs(3))),
    ]
    print(f"{'family':24s} {'d':>4s} {'m':>3s}  max deviation")
    for name, S in sets:
        rep = check_mub(S)
        print(f"{name:24s} {S.dim:4d} {S.m:3d}  {rep.max_deviation:.2e}")

    print("\nFirst Latin square for s=3:")
    for row in mols_prime(3)[0].cells:
        print("  ", *row)

    # the vector for symbol 1 sits on cells (1,1), (2,3), (3,2)
    v = latin_square_mubs(3)[0].matrix[:, 0]
    support = [(int(i) // 3 + 1, int(i) % 3 + 1) for i in np.flatnonzero(np.abs(v) > 1e-12)]
    print("support of v_{1,1}:", support)

    print("\n2-design defect of the complete prime sets:")
    for d in (2, 3, 5, 7):
        print(f"  d={d}: {two_design_defect(prime_mubs(d)):.2e}")


if __name__ == "__main__":
    main()
