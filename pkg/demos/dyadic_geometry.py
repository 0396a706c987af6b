"""Tour of the dyadic machinery: intervals, families, packing, atoms.

Everything downstream rests on three facts demonstrated here: dyadic
intervals either nest or are disjoint, a family's packing constant
certifies its declared sparsity, and the atoms of a family tile the root
so that every member is a contiguous block of atoms.
"""

from sparselab import (
    DyadicInterval,
    ROOT,
    Relation,
    SparseFamily,
    atoms_of,
    carleson_constant,
    chain_family,
    packing_certified,
    relate,
    subdivide,
)

a = DyadicInterval(2, 1)
b = DyadicInterval(3, 2)
print(f"{a} covers [{a.left}, {a.right}), length {a.length}")
print(f"{b} relates to {a}: {relate(b, a).name}")
print(f"{a} relates to its sibling: {relate(a, DyadicInterval(2, 2)).name}")
print("children of", a, "->", [str(c) for c in a.children()])
print("grandchildren:", [str(c) for c in subdivide(a, 2)])

chain = chain_family(4)
print("\nchain of depth 4:", [str(q) for q in chain])
print(f"carleson constant: {carleson_constant(chain):.6g} (2 - 2^-4 = {2 - 2.0**-4})")
print("declared eta =", chain.eta, "certified:", packing_certified(chain))

# an overdeclared family fails the certificate
greedy = SparseFamily(chain.members, eta=0.9)
print("same members declared 0.9-sparse certified:", packing_certified(greedy))

family = SparseFamily(
    (ROOT, DyadicInterval(1, 1), DyadicInterval(2, 1), DyadicInterval(3, 4)),
    eta=0.5,
)
part = atoms_of(family)
print("\nmembers:", [str(q) for q in family])
print("atoms:  ", [str(atom) for atom in part.atoms])
for q in family:
    i0, i1 = part.atom_range(q)
    print(f"  {q} = atoms[{i0}:{i1}]")
