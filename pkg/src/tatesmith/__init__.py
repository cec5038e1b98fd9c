"""Tate cohomology over k[sigma], Smith localization, finite Hecke/Brauer
machinery, excursion algebras over finite targets, and torus base change,
all over exact small finite fields."""

from .field import field_make, Mat, rref, kernel, image, solve, \
    subquotient_dim, intertwiner_space

__all__ = ["field_make", "Mat", "rref", "kernel", "image", "solve",
           "subquotient_dim", "intertwiner_space"]

__version__ = "0.1.0"
