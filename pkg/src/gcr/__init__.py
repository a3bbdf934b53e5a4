"""Chevalley-group calculus for A1 and G2 subgroups of exceptional groups.

Subpackages cover root-system combinatorics, integral structure constants,
symbolic unipotent arithmetic, parabolic level decompositions, modular A1/G2
representation data, explicit embeddings, and cocycle/obstruction machinery
for certifying non-completely-reducible subgroups at p = 5 and 7.
"""

__version__ = "0.1.0"
