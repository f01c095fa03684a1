"""Computable models of Fourier-Stieltjes algebras.

Finite groups get an exact block-matrix model of B(G); free groups get
reduced-word arithmetic and positive definite function tools; Z^d gets
coset-ring arithmetic.
"""
from .free_words import ReducedWord, parse_word, format_word
from .groups import GroupData, bundled, load_group
from .cstar_finite import BlockFunctional, BlockProjection
from .free_pdf import HaagerupParam, RieszSpec
from .coset_lattice import Coset, CosetExpr, Lattice

__version__ = "0.1.0"
