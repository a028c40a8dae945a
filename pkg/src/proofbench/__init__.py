"""proofbench: an executable workbench for ordinal analysis at desk scale.

Modules: CNF ordinal notations (ordinals), Tait-style formulas and sequents
(formulas), computable ordering combinators (orderings), lazy omega-branching
derivation codes with a local-correctness checker (derivations), the
bound-extraction engine (boundedness), certified-sup witness generation
(spector), certificate-store labs (lab), and the CLI (cli).
"""

__version__ = "0.1.0"
