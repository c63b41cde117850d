"""Desingularization, quasi-homogeneity certificates and projective holonomy
of plane curve and foliation germs."""

__version__ = "0.1.0"
