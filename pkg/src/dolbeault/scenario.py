"""Scenario files: parsing with located diagnostics, printing, random
generation and the verification-suite runner.

A scenario is a JSON object whose leaves are coefficient expressions::

    {
      "n": 2, "r": 1, "N": 3,
      "connection": {"theta": [[{"dz1": "zb1^2"}]], "gamma": {"1,1,2": "z2"}},
      "family": {"zt": ["z1 + t*zb2", "z2"], "w": [["1 + t*zb1"]]},
      "forms": {"omega": {"p": 1, "q": 0, "word": "", "components": {"dz1": "z2"}}},
      "suites": ["mc", "lry"],
      "seed": 0
    }

``family`` is either geometric (``zt`` and ``w``, optionally a ``psi``
override) or direct (``phi`` with keys ``"i,j"`` for ``phi^i_j dzbar^j (x) d/dz^i``
and an optional ``psi``).  Form-valued leaves map basis labels such as
``"dzb1^dz2"`` to expressions; E-valued test forms nest them under the frame
index: ``{"1": {"dz1": "z1"}, "2": {...}}``.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bundles import E, ENDE, KINV, T, ConnectionData, OmegaP, ValuedForm, as_valued, zero_matrix
from .coeff_ring import PolySeries
from .correspondence import (CorrespondenceContext, OffShellError, coro1_residual, identity_LRY,
                             identity_nabla01, identity_pro2, identity_pro4, identity_thm1,
                             identity_thm2)
from .deformation import (BeltramiField, EndoField, NotInvertibleAtZero, PolyMatrix, contract,
                          integrability_check, mc_residual, phi_from_trivialization,
                          psi_from_transition, second_residual)
from .expr import ExprError, parse_poly
from .extension import (DeformationFamily, ExtensionError, NotClosedError, extend_bundle,
                        extend_nq, extend_scalar)
from .forms import Form, basis_label, parse_basis_label
from . import randomgen

SUITES = ("mc", "second_integrability", "lry", "pro2", "pro3", "pro4", "thm1", "thm2",
          "nabla01", "coro1", "extend_scalar", "extend_bundle", "extend_nq")


class ScenarioError(ValueError):
    """Invalid scenario input, located in the source text when possible."""

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None,
                 token: Optional[str] = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        tail = f" (at {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{tail}")
        self.message = message
        self.line = line
        self.col = col
        self.token = token


@dataclass(frozen=True)
class ScenarioForm:
    p: int
    q: int
    word: str  # "" or "E"
    value: ValuedForm


@dataclass
class DeformationScenario:
    n: int
    r: int
    N: int
    conn: ConnectionData
    phi: BeltramiField
    psi: EndoField
    zt: Optional[List[PolySeries]] = None
    w: Optional[PolyMatrix] = None
    psi_override: bool = False
    forms: Dict[str, ScenarioForm] = field(default_factory=dict)
    suites: List[str] = field(default_factory=list)
    seed: int = 0
    warnings: List[str] = field(default_factory=list, compare=False)

    @property
    def mode(self) -> str:
        return "geometric" if self.zt is not None else "direct"

    def context(self, with_psi: bool = True) -> CorrespondenceContext:
        return CorrespondenceContext(self.conn, self.phi, self.psi if with_psi else None)


# -- parsing ----------------------------------------------------------------------

def _quote(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


class _Reader:
    """Turns JSON leaves into ring elements, mapping failures to source positions."""

    def __init__(self, text: str, n: int = 1, N: int = 1):
        self.text = text
        self.n = n
        self.N = N
        self.warnings: List[str] = []

    def locate(self, needle: str, offset: int = 0) -> Tuple[Optional[int], Optional[int]]:
        idx = self.text.find(needle)
        if idx < 0:
            return None, None
        idx += offset
        line = self.text.count("\n", 0, idx) + 1
        col = idx - (self.text.rfind("\n", 0, idx) + 1) + 1
        return line, col

    def fail(self, message: str, needle: Optional[str] = None, token: Optional[str] = None,
             offset: int = 0):
        line, col = self.locate(needle, offset) if needle else (None, None)
        raise ScenarioError(message, line, col, token)

    def fail_key(self, message: str, key: str):
        self.fail(message, _quote(key), key)

    def poly(self, src, where: str) -> PolySeries:
        if isinstance(src, (int, float)) and not isinstance(src, bool):
            if isinstance(src, float) and not src.is_integer():
                self.fail(f"{where}: write non-integer constants as expression strings", None, str(src))
            src = str(int(src))
        if not isinstance(src, str):
            self.fail(f"{where}: expected an expression string, got {type(src).__name__}")
        try:
            value, truncated = parse_poly(src, self.n, self.N)
        except ExprError as exc:
            self.fail(f"{where}: {exc.message}", _quote(src), exc.token, offset=1 + exc.pos)
        if truncated:
            self.warnings.append(f"{where}: {src!r} has terms above t^{self.N}; truncated")
        return value

    def form(self, obj, where: str) -> Form:
        if isinstance(obj, str) or isinstance(obj, int):
            return Form.scalar(self.poly(obj, where))
        if not isinstance(obj, dict):
            self.fail(f"{where}: expected an object mapping basis labels to expressions")
        acc = Form.zero(self.n, self.N)
        for label, expr in obj.items():
            try:
                sign, I, J = parse_basis_label(label, self.n)
            except ValueError as exc:
                self.fail_key(f"{where}: {exc}", label)
            if not sign:
                self.fail_key(f"{where}: basis label repeats a generator", label)
            f = self.poly(expr, f"{where}[{label}]")
            acc = acc + Form.basis(self.n, self.N, I, J, f if sign > 0 else -f)
        return acc

    def square(self, obj, size: int, where: str) -> list:
        if not isinstance(obj, list) or len(obj) != size or any(
                not isinstance(row, list) or len(row) != size for row in obj):
            self.fail(f"{where}: expected a {size}x{size} matrix", _quote(where.split(".")[-1]))
        return obj

    def index_key(self, key: str, arity: int, bound: int, where: str) -> Tuple[int, ...]:
        parts = key.split(",")
        if len(parts) != arity or not all(p.strip().isdigit() for p in parts):
            self.fail_key(f"{where}: key must be {arity} comma-separated indices", key)
        idx = tuple(int(p) for p in parts)
        if any(not 1 <= i <= bound for i in idx):
            self.fail_key(f"{where}: index out of range 1..{bound}", key)
        return idx


def _require_int(reader: _Reader, data: dict, key: str, lo: int, default=None) -> int:
    if key not in data:
        if default is not None:
            return default
        reader.fail(f"missing required field {key!r}")
    value = data[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < lo:
        reader.fail_key(f"field {key!r} must be an integer >= {lo}", key)
    return value


def parse_scenario(text: str, N_override: Optional[int] = None) -> DeformationScenario:
    reader = _Reader(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno,
                            text[exc.pos:exc.pos + 1] or "<end>") from None
    if not isinstance(data, dict):
        raise ScenarioError("a scenario must be a JSON object", 1, 1)
    known = {"n", "r", "N", "connection", "family", "forms", "suites", "seed"}
    for key in data:
        if key not in known:
            reader.fail_key(f"unknown field {key!r}", key)

    n = _require_int(reader, data, "n", 1)
    r = _require_int(reader, data, "r", 1, default=1)
    N = _require_int(reader, data, "N", 0)
    if N_override is not None:
        N = N_override
    reader.n, reader.N = n, N
    seed = _require_int(reader, data, "seed", 0, default=0)

    conn = _parse_connection(reader, data.get("connection", {}), n, N, r)
    family = data.get("family")
    if not isinstance(family, dict):
        reader.fail("missing or invalid 'family' object", _quote("family"), "family")
    zt = w = None
    psi_override = False
    if "zt" in family or "w" in family:
        if "phi" in family:
            reader.fail_key("family mixes geometric (zt, w) and direct (phi) input", "phi")
        zt, w = _parse_geometric(reader, family, n, N, r)
        try:
            phi = phi_from_trivialization(zt)
            psi = psi_from_transition(w, conn, phi)
        except NotInvertibleAtZero as exc:
            reader.fail(f"geometric data not invertible at t=0: {exc}", _quote("family"), "family")
        if "psi" in family:
            psi = _parse_psi(reader, family["psi"], n, N, r)
            psi_override = True
    elif "phi" in family:
        phi = _parse_phi(reader, family["phi"], n, N)
        psi = _parse_psi(reader, family["psi"], n, N, r) if "psi" in family else EndoField.zero(r, n, N)
    else:
        reader.fail("family needs either zt/w or phi", _quote("family"), "family")
    for key in family:
        if key not in ("zt", "w", "phi", "psi"):
            reader.fail_key(f"unknown family field {key!r}", key)

    forms = {}
    raw_forms = data.get("forms", {})
    if not isinstance(raw_forms, dict):
        reader.fail("'forms' must be an object", _quote("forms"), "forms")
    for name, spec in raw_forms.items():
        forms[name] = _parse_form(reader, name, spec, n, N, r)

    suites = data.get("suites", [])
    if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
        reader.fail("'suites' must be a list of names", _quote("suites"), "suites")
    for s in suites:
        if s not in SUITES:
            reader.fail(f"unknown suite {s!r}", _quote(s), s)
    return DeformationScenario(n, r, N, conn, phi, psi, zt, w, psi_override, forms,
                               list(suites), seed, reader.warnings)


def _parse_connection(reader: _Reader, obj, n: int, N: int, r: int) -> ConnectionData:
    if not isinstance(obj, dict):
        reader.fail("'connection' must be an object", _quote("connection"), "connection")
    for key in obj:
        if key not in ("theta", "gamma"):
            reader.fail_key(f"unknown connection field {key!r}", key)
    if "theta" in obj:
        rows = reader.square(obj["theta"], r, "connection.theta")
        theta = tuple(tuple(reader.form(x, f"theta[{k + 1}][{l + 1}]") for l, x in enumerate(row))
                      for k, row in enumerate(rows))
        for k, row in enumerate(theta):
            for l, f in enumerate(row):
                if f and f.bidegrees() != {(1, 0)}:
                    reader.fail(f"theta[{k + 1}][{l + 1}] must be a (1,0)-form", _quote("theta"), "theta")
    else:
        theta = zero_matrix(r, r, n, N)
    gamma = {}
    raw = obj.get("gamma", {})
    if not isinstance(raw, dict):
        reader.fail("'gamma' must be an object", _quote("gamma"), "gamma")
    for key, expr in raw.items():
        idx = reader.index_key(key, 3, n, "gamma")
        g = reader.poly(expr, f"gamma[{key}]")
        if g:
            gamma[idx] = g
    return ConnectionData(n, N, r, theta, gamma)


def _parse_geometric(reader: _Reader, family: dict, n: int, N: int, r: int):
    raw_zt = family.get("zt")
    if raw_zt is None:
        zt = [PolySeries.z(n, N, k) for k in range(1, n + 1)]
    else:
        if not isinstance(raw_zt, list) or len(raw_zt) != n:
            reader.fail(f"zt must list {n} expressions", _quote("zt"), "zt")
        zt = [reader.poly(x, f"zt[{k + 1}]") for k, x in enumerate(raw_zt)]
    if "w" in family:
        rows = reader.square(family["w"], r, "family.w")
        w = [[reader.poly(x, f"w[{i + 1}][{j + 1}]") for j, x in enumerate(row)] for i, row in enumerate(rows)]
    else:
        w = [[PolySeries.one(n, N) if i == j else PolySeries.zero(n, N) for j in range(r)] for i in range(r)]
    return zt, w


def _parse_phi(reader: _Reader, obj, n: int, N: int) -> BeltramiField:
    if not isinstance(obj, dict):
        reader.fail("'phi' must be an object with keys \"i,j\"", _quote("phi"), "phi")
    coeffs = {}
    for key, expr in obj.items():
        i, j = reader.index_key(key, 2, n, "phi")
        coeffs[(i, j)] = reader.poly(expr, f"phi[{key}]")
    return BeltramiField.from_coeffs(n, N, coeffs)


def _parse_psi(reader: _Reader, obj, n: int, N: int, r: int) -> EndoField:
    rows = reader.square(obj, r, "family.psi")
    entries = tuple(tuple(reader.form(x, f"psi[{k + 1}][{l + 1}]") for l, x in enumerate(row))
                    for k, row in enumerate(rows))
    for k, row in enumerate(entries):
        for l, f in enumerate(row):
            if f and f.bidegrees() != {(0, 1)}:
                reader.fail(f"psi[{k + 1}][{l + 1}] must be a (0,1)-form", _quote("psi"), "psi")
    return EndoField(entries)


def _parse_form(reader: _Reader, name: str, spec, n: int, N: int, r: int) -> ScenarioForm:
    if not isinstance(spec, dict):
        reader.fail_key(f"form {name!r} must be an object", name)
    for key in ("p", "q"):
        v = spec.get(key)
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= n:
            reader.fail_key(f"form {name!r}: {key} must be an integer in 0..{n}", name)
    p, q = spec["p"], spec["q"]
    word = spec.get("word", "")
    if word not in ("", "E"):
        reader.fail(f"form {name!r}: word must be \"\" or \"E\"", _quote(word), word)
    comps = spec.get("components", {})
    if word == "":
        value = as_valued(reader.form(comps, f"forms.{name}"))
    else:
        if not isinstance(comps, dict):
            reader.fail_key(f"form {name!r}: E-valued components must be keyed by frame index", name)
        parts = {}
        for key, sub in comps.items():
            (k,) = reader.index_key(key, 1, r, f"forms.{name}")
            f = reader.form(sub, f"forms.{name}[{key}]")
            if f:
                parts[(k,)] = f
        value = ValuedForm((E,), n, N, parts)
    degs = value.bidegrees()
    if degs and degs != {(p, q)}:
        reader.fail_key(f"form {name!r} declared ({p},{q}) but has bidegrees {sorted(degs)}", name)
    return ScenarioForm(p, q, word, value)


# -- printing -----------------------------------------------------------------------

def _form_dict(f: Form) -> dict:
    return {basis_label(I, J): str(c) for (I, J), c in f.sorted_terms()}


def scenario_to_dict(sc: DeformationScenario) -> dict:
    out = {"n": sc.n, "r": sc.r, "N": sc.N, "seed": sc.seed}
    conn = {"theta": [[_form_dict(f) for f in row] for row in sc.conn.theta]}
    if sc.conn.gamma:
        conn["gamma"] = {f"{k},{i},{j}": str(g) for (k, i, j), g in sorted(sc.conn.gamma.items())}
    out["connection"] = conn
    if sc.mode == "geometric":
        family = {"zt": [str(f) for f in sc.zt], "w": [[str(f) for f in row] for row in sc.w]}
        if sc.psi_override:
            family["psi"] = [[_form_dict(f) for f in row] for row in sc.psi.entries]
    else:
        family = {"phi": {f"{i},{J[0]}": str(f) for (i, J), f in sorted(sc.phi.coeffs.items())}}
        if not sc.psi.is_zero():
            family["psi"] = [[_form_dict(f) for f in row] for row in sc.psi.entries]
    out["family"] = family
    forms = {}
    for name, sf in sc.forms.items():
        if sf.word == "":
            comps = _form_dict(sf.value.components.get((), Form.zero(sc.n, sc.N)))
        else:
            comps = {str(b[0]): _form_dict(f) for b, f in sorted(sf.value.components.items())}
        forms[name] = {"p": sf.p, "q": sf.q, "word": sf.word, "components": comps}
    if forms:
        out["forms"] = forms
    out["suites"] = list(sc.suites)
    return out


def print_scenario(sc: DeformationScenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"


# -- random scenarios -----------------------------------------------------------------

def random_scenario(n: int, r: int, N: int, seed: int, deg: int = 2, terms: int = 2,
                    suites: Sequence[str] = SUITES) -> DeformationScenario:
    """Geometric-mode scenario (on-shell by construction) drawn from ``seed``."""
    rng = random.Random(seed)
    conn = randomgen.random_connection(rng, n, N, r, deg=deg)
    zt = randomgen.random_zt(rng, n, N, deg, terms)
    w = randomgen.random_w(rng, n, N, r, deg, terms)
    phi = phi_from_trivialization(zt)
    psi = psi_from_transition(w, conn, phi)
    p = rng.randint(0, n)
    q = rng.randint(0, n)
    forms = {
        "omega": ScenarioForm(p, q, "", as_valued(randomgen.random_closed_form(rng, n, N, p, q, deg))),
        "sigma": ScenarioForm(p, q, "E", randomgen.random_closed_valued(rng, n, N, r, p, q, deg)),
    }
    return DeformationScenario(n, r, N, conn, phi, psi, zt, w, False, forms, list(suites), seed)


# -- suite runner ----------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    status: str  # "pass", "fail", "skip"
    checks: int = 0
    message: str = ""
    failures: List[str] = field(default_factory=list)
    details: Dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "checks": self.checks}
        if self.message:
            out["message"] = self.message
        if self.failures:
            out["failures"] = list(self.failures)
        if self.details:
            out["details"] = dict(sorted(self.details.items()))
        return out


@dataclass
class Report:
    scenario: Dict[str, object]
    results: List[SuiteResult]
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def to_json(self, timings: bool = False) -> str:
        suites = []
        for r in self.results:
            item = r.to_json()
            if timings:
                item["seconds"] = round(r.seconds, 6)
            suites.append(item)
        body = {"scenario": self.scenario, "passed": self.passed, "suites": suites,
                "warnings": list(self.warnings)}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for w in self.warnings:
            lines.append(f"warning: {w}")
        for r in self.results:
            head = f"{r.status.upper():4}  {r.name:22} checks={r.checks:<3} {r.seconds:8.3f}s"
            if r.message:
                head += f"  {r.message}"
            lines.append(head)
            for f in r.failures:
                lines.append(f"      residual: {f}")
            for k, v in sorted(r.details.items()):
                lines.append(f"      {k} = {v}")
        lines.append("ALL PASS" if self.passed else "FAILED")
        return "\n".join(lines) + "\n"


_CONJ_WORDS = ((), (E,), (OmegaP(1),), (T,), (KINV, E), (ENDE,))


def _forms_of(sc: DeformationScenario, word: str, pred=lambda sf: True) -> List[Tuple[str, ScenarioForm]]:
    return [(name, sf) for name, sf in sorted(sc.forms.items()) if sf.word == word and pred(sf)]


def _rng(sc: DeformationScenario, suite: str) -> random.Random:
    return random.Random(f"{sc.seed}:{suite}")


class _Run:
    def __init__(self, name: str):
        self.result = SuiteResult(name, "pass")

    def check(self, label: str, residual) -> None:
        self.result.checks += 1
        if residual:
            self.result.status = "fail"
            self.result.failures.append(f"{label}: {residual}")

    def skip(self, message: str) -> SuiteResult:
        self.result.status = "skip"
        self.result.message = message
        return self.result


def _suite_mc(sc, run: _Run):
    run.check("dbar phi - 1/2 [phi, phi]", mc_residual(sc.phi))


def _suite_second(sc, run: _Run):
    run.check("second integrability residual", second_residual(sc.conn, sc.phi, sc.psi))


def _suite_lry(sc, run: _Run):
    ctx = sc.context()
    for name, sf in sorted(sc.forms.items()):
        run.check(name, identity_LRY(ctx, sf.value))
    rng = _rng(sc, "lry")
    for word in _CONJ_WORDS:
        if any(f.kind == "OmegaP" and f.p > sc.n for f in word):
            continue
        s = randomgen.random_valued(rng, word, sc.n, sc.N, sc.r, rng.randint(0, sc.n), rng.randint(0, sc.n))
        run.check(f"random {word and '(x)'.join(map(str, word)) or 'scalar'}", identity_LRY(ctx, s))


def _suite_pro2(sc, run: _Run):
    ctx = sc.context()
    mc = mc_residual(sc.phi)
    if mc:
        run.result.message = "off-shell: residual compared with the Maurer-Cartan defect term"
    inputs = [(name, sf.value) for name, sf in _forms_of(sc, "E", lambda f: f.p == sc.n)]
    rng = _rng(sc, "pro2")
    for q in range(sc.n + 1):
        inputs.append((f"random (n,{q})", randomgen.random_valued(rng, (E,), sc.n, sc.N, sc.r, sc.n, q)))
    for label, s in inputs:
        run.check(label, identity_pro2(ctx, s) - contract(mc, s))


def _suite_pro3(sc, run: _Run):
    if sc.w is None:
        return run.skip("needs transition data w (geometric family)")
    res = integrability_check(sc.w, sc.conn, sc.phi, sc.psi)
    run.check("beta^{0,1} - i_phi beta^{1,0}", res.witness)


def _suite_pro4(sc, run: _Run):
    ctx = sc.context()
    inputs = [(name, sf.value) for name, sf in sorted(sc.forms.items())]
    rng = _rng(sc, "pro4")
    for _ in range(2):
        inputs.append(("random", randomgen.random_valued(rng, (E,), sc.n, sc.N, sc.r,
                                                         rng.randint(0, sc.n), rng.randint(0, sc.n))))
    try:
        for label, s in inputs:
            run.check(label, identity_pro4(ctx, s))
    except OffShellError:
        return run.skip("phi is off-shell; the statement needs Maurer-Cartan")


def _grid_inputs(sc, suite: str, word: str):
    inputs = [(name, sf.value, sf.p) for name, sf in _forms_of(sc, word)]
    rng = _rng(sc, suite)
    for p in range(sc.n + 1):
        for q in range(sc.n + 1):
            if word == "":
                s = as_valued(randomgen.random_form(rng, sc.n, sc.N, p, q))
            else:
                s = randomgen.random_valued(rng, (E,), sc.n, sc.N, sc.r, p, q)
            inputs.append((f"random ({p},{q})", s, p))
    return inputs


def _suite_thm1(sc, run: _Run):
    ctx = sc.context(with_psi=False)
    for label, s, p in _grid_inputs(sc, "thm1", ""):
        run.check(label, identity_thm1(ctx, s, p=p))


def _suite_thm2(sc, run: _Run):
    ctx = sc.context()
    for label, s, p in _grid_inputs(sc, "thm2", "E"):
        run.check(label, identity_thm2(ctx, s, p=p))


def _suite_nabla01(sc, run: _Run):
    ctx = sc.context()
    for word in ("", "E"):
        for label, s, p in _grid_inputs(sc, "nabla01" + word, word):
            run.check(label, identity_nabla01(ctx, s, p=p))


def _suite_coro1(sc, run: _Run):
    if sc.r != 1:
        return run.skip("line bundles only (r = 1)")
    run.check("(dbar - L_phi) psi - i_phi Theta", coro1_residual(sc.context()))


def _family(sc, run: _Run) -> Optional[DeformationFamily]:
    try:
        return DeformationFamily.from_series(sc.phi, sc.psi)
    except ValueError as exc:
        run.result.status = "fail"
        run.result.message = f"not a deformation family: {exc}"
        return None


def _closed_seeds(sc, suite: str, word: str, p_fixed: Optional[int] = None):
    def usable(sf):
        v = sf.value
        closed = not any(f.dbar() for f in v.components.values())
        t_free = all(f.t_degree() <= 0 for f in v.components.values())
        return closed and t_free and (p_fixed is None or sf.p == p_fixed)
    seeds = [(name, sf.value) for name, sf in _forms_of(sc, word, usable)]
    rng = _rng(sc, suite)
    p = p_fixed if p_fixed is not None else rng.randint(0, sc.n)
    q = rng.randint(0, sc.n)
    if word == "":
        seeds.append((f"random ({p},{q})", as_valued(randomgen.random_closed_form(rng, sc.n, sc.N, p, q))))
    else:
        seeds.append((f"random ({p},{q})", randomgen.random_closed_valued(rng, sc.n, sc.N, sc.r, p, q)))
    return seeds


def _run_extension(run: _Run, label: str, solve: Callable[[], object]) -> None:
    run.result.checks += 1
    try:
        res = solve()
    except (ExtensionError, NotClosedError, ValueError) as exc:
        run.result.status = "fail"
        run.result.failures.append(f"{label}: {exc}")
        return
    run.result.details[f"sigma[{label}]"] = str(res.sigma)


def _suite_extend_scalar(sc, run: _Run):
    fam = _family(sc, run)
    if fam is None:
        return run.result
    for label, s in _closed_seeds(sc, "extend_scalar", ""):
        form = s.components.get((), Form.zero(sc.n, sc.N))
        _run_extension(run, label, lambda: extend_scalar(fam, form, sc.N))


def _suite_extend_bundle(sc, run: _Run):
    fam = _family(sc, run)
    if fam is None:
        return run.result
    for label, s in _closed_seeds(sc, "extend_bundle", "E"):
        _run_extension(run, label, lambda: extend_bundle(fam, sc.conn, s, sc.N))


def _suite_extend_nq(sc, run: _Run):
    fam = _family(sc, run)
    if fam is None:
        return run.result
    for label, s in _closed_seeds(sc, "extend_nq", "", p_fixed=sc.n):
        form = s.components.get((), Form.zero(sc.n, sc.N))
        _run_extension(run, label, lambda: extend_nq(fam, form, sc.N))


_RUNNERS = {
    "mc": _suite_mc,
    "second_integrability": _suite_second,
    "lry": _suite_lry,
    "pro2": _suite_pro2,
    "pro3": _suite_pro3,
    "pro4": _suite_pro4,
    "thm1": _suite_thm1,
    "thm2": _suite_thm2,
    "nabla01": _suite_nabla01,
    "coro1": _suite_coro1,
    "extend_scalar": _suite_extend_scalar,
    "extend_bundle": _suite_extend_bundle,
    "extend_nq": _suite_extend_nq,
}


def run_suite(sc: DeformationScenario, name: str) -> SuiteResult:
    if name not in _RUNNERS:
        raise ScenarioError(f"unknown suite {name!r}", token=name)
    run = _Run(name)
    start = time.perf_counter()
    out = _RUNNERS[name](sc, run) or run.result
    out.seconds = time.perf_counter() - start
    return out


def run_suites(sc: DeformationScenario, suites: Optional[Sequence[str]] = None) -> Report:
    names = list(suites) if suites else (sc.suites or list(SUITES))
    for name in names:
        if name not in _RUNNERS:
            raise ScenarioError(f"unknown suite {name!r}", token=name)
    results = [run_suite(sc, name) for name in sorted(set(names))]
    head = {"n": sc.n, "r": sc.r, "N": sc.N, "seed": sc.seed, "mode": sc.mode}
    return Report(head, results, list(sc.warnings))


__all__ = [
    "SUITES", "ScenarioError", "ScenarioForm", "DeformationScenario", "parse_scenario",
    "print_scenario", "scenario_to_dict", "random_scenario", "SuiteResult", "Report",
    "run_suite", "run_suites",
]
