"""Balance and cancellation walkthrough.

Two obstructions to sparsification-style closure, side by side: the integer
affine-lattice balance test with explicit alternating-sum witnesses, and the
cancellation game played on matrices of predicate columns.
"""

from nrdkit.balance import is_balanced_bounded, is_balanced_lattice
from nrdkit.cancellation import cancel, catalan_matrix_check, catalan_search
from nrdkit.catalog import BOOLBCK, BOOLBCK_PLUS, CAT5, CAT5_PLUS, ONE_IN_THREE, or_k


def show(name, rep):
    print(f"  {name:10s} {'balanced' if rep.balanced else 'imbalanced':11s}", end="")
    if rep.witness:
        terms = "".join(("" if i == 0 else " - " if i % 2 else " + ")
                        + "".join(map(str, t))
                        for i, t in enumerate(rep.witness))
        print(f"  witness: {terms} = {''.join(map(str, rep.result))} (outside)")
    else:
        print()


print("Balance (closure under odd alternating sums of tuples):")
show("OR2", is_balanced_lattice(or_k(2)))
show("1-in-3", is_balanced_lattice(ONE_IN_THREE))
show("BoolBCK", is_balanced_bounded(BOOLBCK, 2))
show("BoolBCK+", is_balanced_lattice(BOOLBCK_PLUS))
print()
print("BoolBCK looks balanced at depth 1 but fails at depth 2:")
print(f"  k=1: {is_balanced_bounded(BOOLBCK, 1).balanced}")
print(f"  k=2: {is_balanced_bounded(BOOLBCK, 2).balanced}"
      "  (the 5-term sum produces the identity matrix, which BoolBCK omits)")
print()

print("Cancellation game (delete adjacent equal symbols; confluent):")
print(f"  cancel('0221221') -> {''.join(map(str, cancel('0221221')))}")
cols = [(0, 1, 0, 1, 2), (1, 1, 1, 1, 1), (1, 2, 2, 0, 1),
        (2, 2, 2, 2, 2), (2, 0, 1, 2, 0)]
residual, member = catalan_matrix_check(CAT5, cols)
print(f"  5-column matrix over Cat5: rows cancel to "
      f"{''.join(map(str, residual))}, inside Cat5? {member}")
print(f"  Cat5+ violations up to 5 columns: {len(catalan_search(CAT5_PLUS, 5))}")
