"""abdyn: dynamical invariants of automorphisms of families of polarized
abelian varieties — dynamical degrees, cyclotomic splittings, regularizability
verdicts, toroidal Delaunay fans and translation orbit-closure reports."""

__version__ = "0.1.0"
