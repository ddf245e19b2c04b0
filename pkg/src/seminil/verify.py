"""Exact verification of the geometric claims at sampled component points.

Everything here is a rank or containment computation over Q (cross-checked
mod p): isotropy of the symplectic form on the flag-compatible tangent slice,
the expected slice dimension, the kernel dimension of the one-vertex
extension constraint, and a few closed-form cross-checks.  Failures at
certified-generic samples are hard failures; excess dimensions at possibly
singular points are reported inconclusive after bounded resampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import flags, linalg
from .components import enumerate_components, partition_count
from .linalg import QQ
from .quiver import DimVector, Quiver, arrow_form
from .rep import (
    Rep,
    edge_coordinates,
    moment_differential,
    moment_is_zero,
    reduce_mod_p,
    rep_from_vector,
    symplectic_form,
)
from .sampler import (
    SamplerConfig,
    SamplingFailed,
    _phi_kernel_basis,
    commutant_basis,
    sample_component,
    sample_multiloop,
)


@dataclass
class CheckRecord:
    name: str
    status: str                 # "pass" | "fail" | "inconclusive"
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "status": self.status, "details": self.details}


@dataclass
class VerificationReport:
    quiver_alpha: dict
    seed: int
    records: list = field(default_factory=list)

    def add(self, record: CheckRecord):
        self.records.append(record)

    def counts(self):
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def hard_fail(self) -> bool:
        return any(r.status == "fail" for r in self.records)

    @property
    def inconclusive(self) -> bool:
        return any(r.status == "inconclusive" for r in self.records)

    def exit_code(self) -> int:
        if self.hard_fail:
            return 1
        if self.inconclusive:
            return 2
        return 0

    def to_json(self):
        return {
            "alpha": self.quiver_alpha,
            "seed": self.seed,
            "summary": self.counts(),
            "records": [r.to_json() for r in self.records],
        }

    def to_table(self) -> str:
        lines = [f"{'status':<14} check"]
        for r in self.records:
            extra = " ".join(f"{k}={v}" for k, v in sorted(r.details.items()))
            lines.append(f"{r.status:<14} {r.name} {extra}".rstrip())
        c = self.counts()
        lines.append(
            f"total: {len(self.records)}  pass={c['pass']} fail={c['fail']} inconclusive={c['inconclusive']}"
        )
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tangent slice


def tangent_slice(x: Rep, flag=None):
    """Basis of the flag-compatible kernel of the moment map derivative.

    Directions must be annihilated by the derivative at x, strictly lower the
    flag along declared arrows, and preserve it along opposite arrows; this
    contains the tangent space of the flag-compatible slice at x.
    """
    if not moment_is_zero(x):
        raise ValueError("tangent slice needs a moment-map zero")
    if flag is None:
        res = flags.canonical_chain(x)
        if not res.seminilpotent:
            raise ValueError("tangent slice needs a seminilpotent point")
        flag = res.flag
    F = x.field
    coords = edge_coordinates(x.quiver, x.alpha)
    columns = []
    for aid, r, c in coords:
        unit = rep_from_vector(
            x.quiver,
            x.alpha,
            [F.one if (aid, r, c) == co else F.zero for co in coords],
            F,
        )
        col = []
        dmu = moment_differential(x, unit)
        for v in x.quiver.vertices:
            for row in dmu[v]:
                col.extend(row)
        for k in range(1, len(flag)):
            wk, wk1 = flag[k], flag[k - 1]
            for d in x.quiver.doubled:
                target = wk1 if d.sign == 1 else wk
                m = unit.mat(d.aid)
                for brow in wk.at(d.src):
                    img = linalg.mat_apply(F, m, brow)
                    col.extend(target.reduce(d.tgt, img))
        columns.append(col)
    constraints = linalg.transpose(columns)
    kernel = linalg.nullspace(F, constraints, len(coords))
    return [rep_from_vector(x.quiver, x.alpha, vec, F) for vec in kernel]


def check_isotropy(x: Rep, flag=None, certified=True) -> CheckRecord:
    """The symplectic form must vanish identically on the tangent slice."""
    basis = tangent_slice(x, flag)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if symplectic_form(basis[i], basis[j]) != 0:
                status = "fail" if certified else "inconclusive"
                return CheckRecord(
                    "isotropy", status, {"dim": len(basis), "pair": (i, j)}
                )
    return CheckRecord("isotropy", "pass", {"dim": len(basis)})


def expected_slice_dim(alpha: DimVector, steps) -> int:
    return arrow_form(alpha, alpha) - flags.flag_variety_dim(steps)


def check_dimension(x: Rep, flag=None, steps=None) -> CheckRecord:
    """Slice dimension against the Lagrangian expectation.

    Equality passes; excess is inconclusive (possibly singular sample);
    deficit is a hard contradiction.
    """
    if flag is None or steps is None:
        res = flags.canonical_chain(x)
        flag, steps = res.flag, res.steps
    expected = expected_slice_dim(x.alpha, steps)
    got = len(tangent_slice(x, flag))
    details = {"expected": expected, "computed": got}
    if got == expected:
        return CheckRecord("slice_dimension", "pass", details)
    if got > expected:
        return CheckRecord("slice_dimension", "inconclusive", details)
    return CheckRecord("slice_dimension", "fail", details)


def check_rank_agreement(x: Rep, flag=None, primes=(101, 103)) -> CheckRecord:
    """Tangent slice dimension must agree with its mod-p computation."""
    dim_q = len(tangent_slice(x, flag))
    dims = {}
    from .linalg import BadPrime

    for p in primes:
        try:
            xp = reduce_mod_p(x, p)
        except BadPrime:
            continue
        resp = flags.canonical_chain(xp)
        if not resp.seminilpotent:
            continue
        dims[p] = len(tangent_slice(xp, resp.flag))
    status = "pass" if all(d == dim_q for d in dims.values()) and dims else "inconclusive"
    if dims and any(d != dim_q for d in dims.values()):
        status = "fail"
    return CheckRecord("rank_agreement", status, {"Q": dim_q, **{str(p): d for p, d in dims.items()}})


def check_fiber_formula(quiver: Quiver, v: str, parts, cfg: SamplerConfig) -> CheckRecord:
    """Kernel dimension of the one-vertex extension constraint at a generic stage.

    At a defect-zero sample with a random top block the constraint is
    surjective and its kernel has dimension (2g-1) l (n-l).
    """
    parts = tuple(parts)
    if len(parts) < 2:
        raise ValueError("fiber formula needs at least two flag steps")
    g = len(quiver.loops_at(v))
    loops = quiver.loops_at(v)
    l = parts[-1]
    n = sum(parts)
    m = n - l
    base = sample_multiloop(quiver, v, parts[:-1], cfg, salt="fiber")
    xs = [list(map(list, base.mat(a))) for a in loops]
    ys = [list(map(list, base.mat(f"{a}_bar"))) for a in loops]
    rng = cfg.rng("fiber", v, parts)
    from .sampler import _rand_split_matrix

    for attempt in range(cfg.retries):
        zs = [_rand_split_matrix(rng, l, cfg.bound) for _ in range(g)]
        defect = _top_defect(base, zs, v)
        if defect != 0:
            continue
        kernel, _ = _phi_kernel_basis(xs, ys, zs)
        expected = (2 * g - 1) * l * m
        details = {"expected": expected, "computed": len(kernel), "top_defect": defect}
        status = "pass" if len(kernel) == expected else "fail"
        return CheckRecord("fiber_formula", status, {"w": list(parts), **details})
    return CheckRecord("fiber_formula", "inconclusive", {"w": list(parts), "reason": "no defect-zero draw"})


def _top_defect(base: Rep, zs, v: str) -> int:
    """Joint intertwiner dimension between the top base quotient and a new block."""
    F = base.field
    res = flags.canonical_chain(base)
    flag = res.flag
    top, below = flag[-1], flag[-2]
    section = [below.reduce(v, r) for r in top.at(v)]
    sec, piv = linalg.rref(F, section)
    loops = base.quiver.loops_at(v)
    l = len(zs[0])
    dk = len(sec)
    rows = []
    for i, a in enumerate(loops):
        y = base.mat(f"{a}_bar")
        induced_cols = []
        for srow in sec:
            img = below.reduce(v, linalg.mat_apply(F, y, srow))
            induced_cols.append(linalg.coords_against(F, sec, piv, img))
        yk = linalg.transpose(induced_cols)
        z = zs[i]
        for a_ in range(l):
            for b_ in range(dk):
                row = [F.zero] * (l * dk)
                for c_ in range(l):
                    row[c_ * dk + b_] = F.add(row[c_ * dk + b_], z[a_][c_])
                for c_ in range(dk):
                    row[a_ * dk + c_] = F.sub(row[a_ * dk + c_], yk[c_][b_])
                rows.append(row)
    return len(linalg.nullspace(F, rows, l * dk))


# ---------------------------------------------------------------------------
# closed-form cross-checks


def conjugate_partition(parts):
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, max(parts) + 1))


def commutant_dim_two_ways(lam_by_eig, mu_by_eig, rng):
    """dim {X : X u = v X} directly and via shared-eigenvalue conjugate sums.

    u and v are built from prescribed Jordan data per integer eigenvalue and
    conjugated by random unimodular matrices, so both computations are exact.
    """

    def build(eigen_parts):
        blocks = []
        for eig, parts in sorted(eigen_parts.items()):
            for p in parts:
                blocks.append((eig, p))
        n = sum(p for _, p in blocks)
        m = linalg.zeros(QQ, n, n)
        off = 0
        for eig, p in blocks:
            for k in range(p):
                m[off + k][off + k] = QQ.of(eig)
                if k + 1 < p:
                    m[off + k][off + k + 1] = QQ.one
            off += p
        g = _random_unimodular(n, rng)
        ginv = _invert(g)
        return linalg.mat_mul(QQ, linalg.mat_mul(QQ, g, m), ginv), n

    u, nu = build(lam_by_eig)
    v, nv = build(mu_by_eig)
    rows = []
    for r in range(nv):
        for c in range(nu):
            e = linalg.zeros(QQ, nv, nu)
            e[r][c] = QQ.one
            comm = linalg.mat_sub(QQ, linalg.mat_mul(QQ, e, u), linalg.mat_mul(QQ, v, e))
            rows.append([comm[i][j] for i in range(nv) for j in range(nu)])
    direct = len(linalg.nullspace(QQ, linalg.transpose(rows), nu * nv))
    spectral = 0
    for eig in set(lam_by_eig) & set(mu_by_eig):
        lc = conjugate_partition(tuple(sorted(lam_by_eig[eig], reverse=True)))
        mc = conjugate_partition(tuple(sorted(mu_by_eig[eig], reverse=True)))
        spectral += sum(a * b for a, b in zip(lc, mc))
    return direct, spectral


def _random_unimodular(n, rng):
    upper = linalg.identity(QQ, n)
    lower = linalg.identity(QQ, n)
    for i in range(n):
        for j in range(n):
            if i < j:
                upper[i][j] = QQ.of(rng.randint(-2, 2))
            elif i > j:
                lower[i][j] = QQ.of(rng.randint(-2, 2))
    return linalg.mat_mul(QQ, upper, lower)


def _invert(m):
    n = len(m)
    aug = [list(row) + list(ident_row) for row, ident_row in zip(m, linalg.identity(QQ, n))]
    red, piv = linalg.rref(QQ, aug)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# the suite


def run_suite(quiver: Quiver, alpha, cfg: SamplerConfig) -> VerificationReport:
    """Enumerate, sample, and check every component of (quiver, alpha)."""
    alpha = DimVector.of(quiver, alpha)
    report = VerificationReport(alpha.as_dict(), cfg.seed)
    catalog = enumerate_components(quiver, alpha, cfg)
    con = alpha.concentrated()
    g = len(quiver.loops_at(con[0])) if con else None

    expected_count = None
    if con is not None:
        v, n = con
        if g == 0:
            expected_count = 1
        elif g == 1:
            expected_count = partition_count(n)
        else:
            expected_count = 2 ** (n - 1)
    if expected_count is not None:
        report.add(
            CheckRecord(
                "component_count",
                "pass" if len(catalog.entries) == expected_count else "fail",
                {"expected": expected_count, "computed": len(catalog.entries)},
            )
        )

    for entry in catalog.entries:
        label = entry.label
        dim = arrow_form(alpha, alpha)
        report.add(
            CheckRecord(
                "dimension_bookkeeping",
                "pass" if entry.dim == dim else "fail",
                {"label": label.key(), "dim": entry.dim},
            )
        )
        for s in range(cfg.n_seeds):
            try:
                x = entry.sample(cfg, salt=f"suite{s}")
            except SamplingFailed as e:
                report.add(
                    CheckRecord("sampling", "fail", {"label": label.key(), "error": str(e)})
                )
                continue
            res = flags.canonical_chain(x)
            member = moment_is_zero(x) and res.seminilpotent
            report.add(
                CheckRecord(
                    "membership",
                    "pass" if member else "fail",
                    {"label": label.key(), "seed": s},
                )
            )
            if not member:
                continue
            covering = any(flags.ideal_codim(x, u) >= 1 for u in quiver.vertices)
            report.add(
                CheckRecord(
                    "covering",
                    "pass" if covering or alpha.is_zero() else "fail",
                    {"label": label.key(), "seed": s},
                )
            )
            definition_ok = flags.flag_satisfies_definition(x, res.flag)
            report.add(
                CheckRecord(
                    "flag_definition",
                    "pass" if definition_ok else "fail",
                    {"label": label.key(), "seed": s},
                )
            )
            rec = check_isotropy(x, res.flag)
            rec.details.update({"label": label.key(), "seed": s})
            report.add(rec)
            rec = _dimension_with_resampling(entry, x, res, cfg, s)
            rec.details.update({"label": label.key(), "seed": s})
            report.add(rec)
            if s == 0:
                rec = check_rank_agreement(x, res.flag)
                rec.details.update({"label": label.key()})
                report.add(rec)
            if s == 0 and con is not None and g is not None and g >= 1:
                defects = flags.intertwiner_defects(x, res.flag)
                if g >= 2:
                    report.add(
                        CheckRecord(
                            "top_stratum_defects",
                            "pass" if all(d == 0 for d in defects) else "inconclusive",
                            {"label": label.key(), "delta": list(defects)},
                        )
                    )

    if con is not None and g is not None:
        v, n = con
        if g == 1:
            for entry in catalog.entries:
                parts = entry.label.parts
                blocks = conjugate_partition(parts)
                x = sample_component(entry.label, cfg, salt="centralizer")
                loop = quiver.loops_at(v)[0]
                basis = commutant_basis(QQ, list(map(list, x.mat(loop))))
                expected = sum(b * b for b in conjugate_partition(blocks))
                report.add(
                    CheckRecord(
                        "centralizer_dimension",
                        "pass" if len(basis) == expected else "fail",
                        {"label": entry.label.key(), "expected": expected, "computed": len(basis)},
                    )
                )
        if g >= 2:
            for entry in catalog.entries:
                parts = entry.label.parts
                if len(parts) < 2:
                    continue
                rec = check_fiber_formula(quiver, v, parts, cfg)
                report.add(rec)

    rng = random.Random(f"{cfg.seed}:commutant")
    for trial in range(2):
        lam = {0: (2, 1), 1: (1,)} if trial == 0 else {0: (2,), 2: (1, 1)}
        mu = {0: (1, 1), 1: (2,)} if trial == 0 else {0: (3,), 1: (1,)}
        direct, spectral = commutant_dim_two_ways(lam, mu, rng)
        report.add(
            CheckRecord(
                "commutant_codimension",
                "pass" if direct == spectral else "fail",
                {"trial": trial, "direct": direct, "spectral": spectral},
            )
        )
    return report


def _dimension_with_resampling(entry, x, res, cfg: SamplerConfig, s: int) -> CheckRecord:
    rec = check_dimension(x, res.flag, res.steps)
    attempt = 0
    while rec.status == "inconclusive" and attempt < cfg.retries:
        try:
            x = entry.sample(cfg, salt=f"resample{s}.{attempt}")
        except SamplingFailed:
            break
        res = flags.canonical_chain(x)
        rec = check_dimension(x, res.flag, res.steps)
        attempt += 1
    if attempt:
        rec.details["resamples"] = attempt
    return rec
