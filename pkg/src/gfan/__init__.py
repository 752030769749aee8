"""Cluster algebras with principal coefficients, orbifold triangulations,
shear coordinates of laminates and g-vector fans, in exact arithmetic."""

__version__ = "0.1.0"
