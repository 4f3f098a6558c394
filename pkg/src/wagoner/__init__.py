"""Wagoner complexes for groups with root data.

Modules: ``algebra`` (finite fields, exact arithmetic, Smith form),
``coxeter`` (Coxeter systems, roots and root intervals), ``rootdata``
(matrix groups with root subgroups), ``complexes`` and ``homology``
(the Wagoner complex, the building, homology), ``presentation`` and
``homotopy`` (coset enumeration, colimits, fundamental groups),
``affine`` (n-cells in affine apartments), ``cli`` (batch driver).
"""

__version__ = "0.1.0"
