"""bianchi_adjoint: exact verification toolkit for the p-adic adjoint pairing
of Bianchi cuspforms.

Submodules
----------
padic     exact rational / truncated p-adic arithmetic, splitting data
symalg    the function field Q(lam_p, lam_pbar) and the two-root quotient algebra
amice     binomial-factorial bases of r-analytic functions and their valuations
weights   classical weight modules, actions, algebraic and twisted pairings
hecke     coset decompositions, module operators, class calculus, stabilisation
stabpair  the 4x4 pairing engine: Gram matrix, adjoints, the Theta factor
dist      truncated distribution modules, slopes, projectors, specialisation
adjoint   adjoint L Euler factors, the archimedean factor, value assembly
records   eigenform JSON ingestion and run configuration
reports   identity suites with stable anchors and deterministic reports
cli       the bianchi-adjoint command line
"""

from . import adjoint, amice, dist, hecke, padic, records, reports, stabpair, symalg, weights

__all__ = ["adjoint", "amice", "dist", "hecke", "padic", "records", "reports",
           "stabpair", "symalg", "weights"]
__version__ = "0.1.0"
