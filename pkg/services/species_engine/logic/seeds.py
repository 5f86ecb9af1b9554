"""
Reduced potentials whose premutation at k is 2-maximal.
"""

from __future__ import annotations

import logging

from services.species_engine.logic.bimodule import Bimodule, check_mutable
from services.species_engine.logic.series import Series, sum_series

logger = logging.getLogger(__name__)


def seed_potential(M: Bimodule, k: int, degree: int = 3) -> Series:
    """
    Sum of h_i g_i over every pair of vertices s != t.

    The h_i run over the paths a r b with a: s -> k, r in L(k), b: k -> t,
    the g_i over the generators t -> s; both lists are sorted and paired
    until the shorter one runs out. After premutation the brackets [a r b]
    meet the g_i in a quadratic term of full rank on the smaller side.

    Raises:
        MutationUndefinedAtVertex: loops or a 2-cycle through k.
    """
    check_mutable(M, k)
    species = M.species
    terms = []
    for s in species.vertices:
        for t in species.vertices:
            if s == t or k in (s, t):
                continue
            paths = [
                (a.name, r, b.name)
                for a in M.block(s, k)
                for r in species.labels(k)
                for b in M.block(k, t)
            ]
            returns = [g.name for g in M.block(t, s)]
            for (a, r, b), g in zip(paths, returns, strict=False):
                pairs = [
                    (species.unit(s), a),
                    (r, b),
                    (species.unit(t), g),
                ]
                terms.append(Series.monomial(M, pairs, None, 1, degree))
    logger.debug(f"Seed potential at {k}: {len(terms)} terms")
    return sum_series(terms, M, degree)
