"""Finitely presented group gadgets: machine encodings, presentation
constructors, certificates, and budgeted semi-decision engines."""

from .abelian import (AbelianInvariants, IntMatrix, abelian_invariants, abelian_word_problem, is_perfect,
                      relation_matrix, smith_normal_form)
from .boone import BooneOutput, beta, boone_encode, certificate_from_derivation
from .certificates import TrivialityCertificate, verify_certificate
from .core import (EMPTY, GroupPresentation, Homomorphism, PresentationError, SemigroupPresentation, Word,
                   abelianize, apply_hom, direct_product_with_cyclic, free_product, free_reduce, parse_presentation,
                   parse_word, format_presentation, format_word)
from .cosets import CosetTable, coset_enumerate
from .engines import (Budget, abelianization_pipeline, enumerate_trivial_words, iso_search,
                      normal_generator_search, simple_wp, triviality_semi)
from .gadgets import adversary_demo, free_product_family, nth_prime, phi_family, pi, psi
from .gordon import gordon, gordon_rank2_generators
from .machine import TuringMachine, cantor_pair, cantor_tuple, cantor_unpair, phi_input, run, zoo
from .post import Derivation, derive_from_trace, post_encode, rewrite_search, verify_derivation

__version__ = "0.1.0"
