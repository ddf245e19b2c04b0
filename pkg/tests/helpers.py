"""Shared helpers: random representations and exact graded base changes."""

from fractions import Fraction

from seminil import linalg
from seminil.linalg import QQ
from seminil.quiver import DimVector
from seminil.rep import Rep


def rand_rep(quiver, alpha, rng, b=4):
    alpha = DimVector.of(quiver, alpha)
    mats = {}
    for d in quiver.doubled:
        mats[d.aid] = [
            [Fraction(rng.randint(-b, b)) for _ in range(alpha[d.src])]
            for _ in range(alpha[d.tgt])
        ]
    return Rep(quiver, alpha, mats)


def rand_graded_unipotent(quiver, alpha, rng):
    """Invertible graded change of basis with exact integer inverse."""
    out = {}
    for v in quiver.vertices:
        n = alpha[v]
        upper = linalg.identity(QQ, n)
        lower = linalg.identity(QQ, n)
        for i in range(n):
            for j in range(n):
                if i < j:
                    upper[i][j] = Fraction(rng.randint(-2, 2))
                elif i > j:
                    lower[i][j] = Fraction(rng.randint(-2, 2))
        out[v] = linalg.mat_mul(QQ, upper, lower)
    return out


def invert(m):
    n = len(m)
    aug = [list(r) + list(e) for r, e in zip(m, linalg.identity(QQ, n))]
    red, piv = linalg.rref(QQ, aug)
    return [row[n:] for row in red]


def act(quiver, g, ginv, x):
    """Graded base change of a representation."""
    return Rep(
        quiver,
        x.alpha,
        {
            d.aid: linalg.mat_mul(QQ, linalg.mat_mul(QQ, g[d.tgt], list(map(list, x.mat(d.aid)))), ginv[d.src])
            for d in quiver.doubled
        },
    )
