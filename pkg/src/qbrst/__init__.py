"""Exact BRST charges for quantum Lie algebras.

Modules: ``scalar`` (exact coefficients in q), ``tensor`` (sparse index
tensors), ``braid`` (axioms, antisymmetrizers), ``nf`` (PBW normal forms),
``complex`` (the exterior extension and its operators), ``brst`` (the
charge), ``uqgl`` and ``olj`` (the U_q(gl(N)) example), ``io`` and ``cli``.
"""

__version__ = "0.1.0"
