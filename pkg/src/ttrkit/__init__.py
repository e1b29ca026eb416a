"""Typed and untyped lambda-calculus toolkit for storage operators.

The modules build on each other:

- :mod:`ttrkit.lambda_core`: terms, head reduction and normalization.
- :mod:`ttrkit.encodings`: numerals and the named combinators.
- :mod:`ttrkit.formulas`: second-order formulas with least fixed points.
- :mod:`ttrkit.subtyping`: the subtyping calculus.
- :mod:`ttrkit.typing_rules`: typing derivations.
- :mod:`ttrkit.storage`: empirical and symbolic storage-operator checks.
"""

__version__ = "0.1.0"
