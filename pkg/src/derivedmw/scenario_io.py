"""Scenario files, reduction reports, and the command-line interface.

A scenario is a TOML file::

    name = "gm_tstar_c"
    variables = ["q", "p"]
    omega = [["0", "-1"], ["1", "0"]]
    mu = ["0"]                      # or an [orbit] table, never both

    [lie]
    basis = ["t"]
    reductive = true
    brackets = { "h,e" = "2*e" }    # [e_h, e_e] = 2 e_e; mirrored entries implied

    [action]
    t = ["q", "-p"]

    [moment]
    t = "q*p"

    [orbit]                          # coordinates dual to the basis, in order
    coordinates = ["y"]
    ideal = ["y - 1"]
    form = [["0"]]                   # numerators of ω_O
    denominator = "1"

    [options]
    order = "degrevlex"
    truncate_weight = 3
    graded_bound = 6
    seed = 0

    [expect]                         # used by the corpus runner
    exit = 1
    failing = ["kks"]
"""

from __future__ import annotations

import argparse
import concurrent.futures
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import orbit as orbit_mod
from .errors import DerivedMWError, ParseError, ScenarioError
from .hamspace import HamiltonianSpace, LieAlgebraData
from .koszul import build_koszul, tor
from .parser import parse_poly
from .polycore import PolyMatrix, PolyRing, as_rational
from .reduction import verify_theorem

SCHEMA_VERSION = 1
CERTIFICATES = ("symplectic", "action", "hamiltonian", "theta_squares", "quasi_iso", "strictly_closed",
                "invariant", "kks", "classical_consistency", "tangent_complex")
MASKED_KEYS = ("timing", "cross_check")
DEFAULT_OPTIONS = {"order": "degrevlex", "truncate_weight": 3, "graded_bound": 6, "seed": 0}
CORPUS_DIR = Path(__file__).with_name("corpus")


@dataclass
class Scenario:
    name: str
    variables: tuple
    omega: list
    lie: LieAlgebraData
    action: list
    moment: list
    mu: tuple | None = None
    orbit: dict | None = None
    options: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    path: str | None = None

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.variables)

    def space(self) -> HamiltonianSpace:
        R = self.ring
        om = PolyMatrix(R, self.omega)
        return HamiltonianSpace(R, om, self.lie, self.action, self.moment, name=self.name)

    def orbit_presentation(self) -> orbit_mod.OrbitPresentation | None:
        if self.orbit is None:
            return None
        o = self.orbit
        return orbit_mod.OrbitPresentation(o["ring"], o["ideal"], PolyMatrix(o["ring"], o["form"]),
                                           o["denominator"])


def _need(table, key, where):
    if key not in table:
        raise ScenarioError(f"{where}: missing key {key!r}")
    return table[key]


def _parse(text, ring, where):
    try:
        return parse_poly(str(text), ring)
    except ParseError as e:
        raise ScenarioError(f"{where}: {e} in {text!r}") from e


def _rational(x, where):
    try:
        if isinstance(x, str):
            return Fraction(x)
        return as_rational(x)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ScenarioError(f"{where}: {x!r} is not a rational number") from e


def _parse_lie(table) -> LieAlgebraData:
    basis = [str(b) for b in _need(table, "basis", "[lie]")]
    if not basis or len(set(basis)) != len(basis):
        raise ScenarioError("[lie]: basis must be a nonempty list of distinct labels")
    bring = PolyRing(basis)
    r = len(basis)
    c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    given = {}
    for key, value in dict(table.get("brackets", {})).items():
        parts = [s.strip() for s in str(key).split(",")]
        if len(parts) != 2 or any(p not in basis for p in parts):
            raise ScenarioError(f"[lie.brackets]: key {key!r} must be 'a,b' with basis labels")
        f = _parse(value, bring, f"[lie.brackets] {key}")
        if any(sum(m) != 1 for m, _ in f.items()):
            raise ScenarioError(f"[lie.brackets] {key}: bracket must be a linear combination of basis labels")
        vec = [Fraction(0)] * r
        for m, coeff in f.items():
            vec[m.index(1)] = coeff
        i, j = basis.index(parts[0]), basis.index(parts[1])
        given[(i, j)] = vec
    for (i, j), vec in given.items():
        if i == j and any(vec):
            raise ScenarioError(f"[lie.brackets]: [{basis[i]},{basis[i]}] must vanish (antisymmetry)")
        if (j, i) in given and given[(j, i)] != [-x for x in vec]:
            raise ScenarioError(f"[lie.brackets]: [{basis[i]},{basis[j]}] and [{basis[j]},{basis[i]}] "
                                "are not antisymmetric")
        c[i][j] = list(vec)
        c[j][i] = [-x for x in vec]
    reductive = table.get("reductive", True)
    if not isinstance(reductive, bool):
        raise ScenarioError("[lie]: reductive must be a boolean")
    return LieAlgebraData(basis, c, reductive)


def scenario_from_dict(data: dict, path: str | None = None) -> Scenario:
    where = path or "<scenario>"
    name = str(data.get("name") or (Path(path).stem if path else "scenario"))
    variables = tuple(str(v) for v in _need(data, "variables", where))
    if not variables or len(set(variables)) != len(variables):
        raise ScenarioError(f"{where}: variables must be a nonempty list of distinct names")
    for v in variables:
        if not v.isidentifier():
            raise ScenarioError(f"{where}: {v!r} is not a valid identifier")
    R = PolyRing(variables)
    n = len(variables)
    om_raw = _need(data, "omega", where)
    if not isinstance(om_raw, list) or len(om_raw) != n or any(not isinstance(r, list) or len(r) != n for r in om_raw):
        shape = (len(om_raw), "x".join(str(len(r)) for r in om_raw)) if isinstance(om_raw, list) else "?"
        raise ScenarioError(f"{where}: omega must be {n}x{n}, got rows {shape}")
    omega = [[_parse(x, R, f"omega[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(om_raw)]
    lie = _parse_lie(_need(data, "lie", where))
    act_t = _need(data, "action", where)
    mom_t = _need(data, "moment", where)
    for tname, t in (("action", act_t), ("moment", mom_t)):
        extra = set(t) - set(lie.labels)
        missing = set(lie.labels) - set(t)
        if extra or missing:
            raise ScenarioError(f"[{tname}]: keys must be the basis labels; missing {sorted(missing)}, "
                                f"unexpected {sorted(extra)}")
    action = []
    for lab in lie.labels:
        vec = act_t[lab]
        if not isinstance(vec, list) or len(vec) != n:
            raise ScenarioError(f"[action] {lab}: need a list of {n} component expressions")
        action.append([_parse(x, R, f"[action] {lab}[{j}]") for j, x in enumerate(vec)])
    moment = [_parse(mom_t[lab], R, f"[moment] {lab}") for lab in lie.labels]
    has_mu, has_orbit = "mu" in data, "orbit" in data
    if has_mu == has_orbit:
        raise ScenarioError(f"{where}: exactly one of 'mu' and [orbit] must be given")
    mu = orbit = None
    if has_mu:
        raw = data["mu"]
        if not isinstance(raw, list) or len(raw) != lie.dim:
            raise ScenarioError(f"{where}: mu must list {lie.dim} values")
        mu = tuple(_rational(x, f"mu[{i}]") for i, x in enumerate(raw))
    else:
        o = data["orbit"]
        coords = tuple(str(c) for c in _need(o, "coordinates", "[orbit]"))
        if len(coords) != lie.dim:
            raise ScenarioError(f"[orbit]: need {lie.dim} coordinates, got {len(coords)}")
        clash = set(coords) & set(variables)
        if clash:
            raise ScenarioError(f"[orbit]: coordinates clash with variables: {sorted(clash)}")
        Y = PolyRing(coords)
        ideal = [_parse(g, Y, "[orbit] ideal") for g in _need(o, "ideal", "[orbit]")]
        if not ideal:
            raise ScenarioError("[orbit]: ideal needs at least one generator")
        form_raw = _need(o, "form", "[orbit]")
        r = lie.dim
        if not isinstance(form_raw, list) or len(form_raw) != r or any(len(row) != r for row in form_raw):
            raise ScenarioError(f"[orbit]: form must be {r}x{r}")
        form = [[_parse(x, Y, f"[orbit] form[{i}][{j}]") for j, x in enumerate(row)]
                for i, row in enumerate(form_raw)]
        den = _parse(o.get("denominator", "1"), Y, "[orbit] denominator")
        if not den:
            raise ScenarioError("[orbit]: denominator must be nonzero")
        orbit = {"ring": Y, "ideal": ideal, "form": form, "denominator": den}
    options = dict(DEFAULT_OPTIONS)
    for k, v in dict(data.get("options", {})).items():
        if k not in DEFAULT_OPTIONS:
            raise ScenarioError(f"[options]: unknown option {k!r}")
        options[k] = v
    _check_options(options, where)
    expect = dict(data.get("expect", {}))
    return Scenario(name, variables, omega, lie, action, moment, mu, orbit, options, expect, path)


def _check_options(options, where):
    if options["order"] not in ("degrevlex", "lex"):
        raise ScenarioError(f"{where}: order must be degrevlex or lex")
    for k in ("truncate_weight", "graded_bound", "seed"):
        if not isinstance(options[k], int) or isinstance(options[k], bool) or options[k] < 0:
            raise ScenarioError(f"{where}: {k} must be a non-negative integer")
    if options["truncate_weight"] < 3:
        raise ScenarioError(f"{where}: truncate_weight must be at least 3 to certify a 2-form")


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ScenarioError(f"cannot read {path}: {e.strerror}") from e
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as e:
        raise ScenarioError(f"{path}: {e}") from e
    return scenario_from_dict(data, str(path))


def _merge_options(scenario: Scenario, overrides: dict | None) -> dict:
    opts = dict(scenario.options)
    for k, v in (overrides or {}).items():
        if v is not None:
            opts[k] = v
    _check_options(opts, scenario.path or scenario.name)
    return opts


def build_report(scenario: Scenario, overrides: dict | None = None, cross_check: bool = False) -> dict:
    opts = _merge_options(scenario, overrides)
    t0 = time.perf_counter()
    H = scenario.space()
    kwargs = dict(order=opts["order"], w_max=opts["truncate_weight"], graded_bound=opts["graded_bound"],
                  seed=opts["seed"], cross_check=cross_check)
    if scenario.orbit is None:
        frag = verify_theorem(H, scenario.mu, **kwargs)
        mode = "level"
    else:
        frag = orbit_mod.verify_shifted(H, scenario.orbit_presentation(), **kwargs)
        mode = "orbit"
    frag.pop("elapsed", None)
    certs = {name: frag["certificates"].get(name) for name in CERTIFICATES}
    detail = frag.pop("quasi_iso_detail", None)
    cross = None
    if detail is not None:
        cross = detail.pop("cross_check", None)
    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario.name,
        "mode": mode,
        "options": opts,
        "level": [str(m) for m in scenario.mu] if scenario.mu is not None else None,
        "certificates": certs,
        "witnesses": frag["witnesses"],
        "quasi_iso_method": detail["method"] if detail else None,
        "tor": frag["tor"],
        "complete_intersection": frag["complete_intersection"],
        "codimension_check": frag["codimension_check"],
        "classical_level_set": frag["classical_level_set"],
        "virtual_dimension": frag["virtual_dimension"],
        "point_checks": frag["point_checks"],
        "invariant_matrix_path": frag["invariant_matrix_path"],
        "assumptions": {
            "reductive_declared": scenario.lie.reductive,
            "smooth_stack": "structural: the reduced tangent complex has free slots in degrees -1, 0, 1",
            "pullback_identity": "structural: the middle component of theta is the restricted omega",
        },
    }
    for k in ("eliminated_level_set", "orbit_dimension", "point_orbit_round_trip"):
        if k in frag:
            report[k] = frag[k]
    if cross_check:
        report["cross_check"] = cross
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return report


def failing_certificates(report: dict) -> list:
    fails = [k for k, v in report["certificates"].items() if v is False]
    cross = report.get("cross_check")
    if cross is not None and not cross.get("agrees", True):
        fails.append("cross_check")
    return fails


def report_exit_code(report: dict) -> int:
    return 1 if failing_certificates(report) else 0


def masked(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in MASKED_KEYS}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def summary_text(report: dict) -> str:
    out = io.StringIO()
    out.write(f"scenario {report['scenario']} ({report['mode']})\n")
    for k, v in report["certificates"].items():
        shown = "n/a" if v is None else str(v).lower()
        out.write(f"  {k:22s} {shown}\n")
    cross = report.get("cross_check")
    if cross is not None:
        out.write(f"  {'cross_check':22s} {str(cross['agrees']).lower()} (cone homology)\n")
    tor1 = report["tor"][1] if len(report["tor"]) > 1 else None
    out.write(f"  complete_intersection  {str(report['complete_intersection']).lower()}\n")
    if tor1 is not None:
        out.write(f"  tor1_zero              {str(tor1['is_zero']).lower()}\n")
    out.write(f"  virtual_dimension      {report['virtual_dimension']}\n")
    for name, ws in report["witnesses"].items():
        for w in ws:
            out.write(f"  witness[{name}] {json.dumps(w, ensure_ascii=False, sort_keys=True)}\n")
    return out.getvalue()


def corpus_files(directory=None) -> list:
    d = Path(directory) if directory else CORPUS_DIR
    return sorted(d.glob("*.toml"))


def golden_path(scenario_path: Path) -> Path:
    return scenario_path.parent / "golden" / (scenario_path.stem + ".json")


def run_corpus_entry(path: str, overrides: dict | None = None, cross_check: bool = False) -> dict:
    """Run one corpus scenario; returns a JSON-friendly outcome record."""
    path = Path(path)
    sc = load_scenario(path)
    rep = build_report(sc, overrides, cross_check)
    text = dumps(masked(rep))
    gp = golden_path(path)
    golden = gp.read_text(encoding="utf-8") if gp.exists() else None
    fails = failing_certificates(rep)
    exp_exit = sc.expect.get("exit", 0)
    exp_fail = sorted(sc.expect.get("failing", []))
    return {
        "name": sc.name,
        "path": str(path),
        "report": text,
        "golden_match": golden == text,
        "has_golden": golden is not None,
        "exit": report_exit_code(rep),
        "expected_exit": exp_exit,
        "failing": sorted(fails),
        "expected_failing": exp_fail,
        "summary": summary_text(rep),
    }


def _corpus_worker(args):
    path, overrides, cross = args
    try:
        return run_corpus_entry(path, overrides, cross)
    except DerivedMWError as e:
        return {"name": Path(path).stem, "path": str(path), "error": str(e)}


def run_corpus(directory=None, overrides=None, jobs: int = 1, cross_check: bool = False, write_golden=False,
               report_dir=None, stream=None) -> int:
    stream = stream or sys.stdout
    files = corpus_files(directory)
    if not files:
        stream.write("no corpus scenarios found\n")
        return 2
    tasks = [(str(p), overrides, cross_check) for p in files]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_corpus_worker, tasks))
    else:
        results = [_corpus_worker(t) for t in tasks]
    ok = True
    for res in results:
        if "error" in res:
            ok = False
            stream.write(f"ERROR {res['name']}: {res['error']}\n")
            continue
        if write_golden:
            gp = golden_path(Path(res["path"]))
            gp.parent.mkdir(exist_ok=True)
            gp.write_text(res["report"], encoding="utf-8")
            res["golden_match"] = True
        if report_dir:
            Path(report_dir).mkdir(parents=True, exist_ok=True)
            (Path(report_dir) / f"{res['name']}.json").write_text(res["report"], encoding="utf-8")
        good = (res["golden_match"] and res["exit"] == res["expected_exit"]
                and res["failing"] == res["expected_failing"])
        ok = ok and good
        status = "PASS" if good else "FAIL"
        notes = []
        if not res["golden_match"]:
            notes.append("golden mismatch" if res["has_golden"] else "no golden")
        notes.append(f"exit {res['exit']} (expected {res['expected_exit']})")
        if res["failing"] or res["expected_failing"]:
            notes.append(f"failing {res['failing']} (expected {res['expected_failing']})")
        stream.write(f"{status} {res['name']}: {'; '.join(notes)}\n")
        if res["failing"]:
            for line in res["summary"].splitlines():
                if line.strip().startswith("witness["):
                    stream.write(f"    {line.strip()}\n")
    return 0 if ok else 1


def _add_global(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--order", choices=("degrevlex", "lex"), default=d(None))
    p.add_argument("--truncate-weight", type=int, dest="truncate_weight", default=d(None))
    p.add_argument("--graded-bound", type=int, dest="graded_bound", default=d(None))
    p.add_argument("--seed", type=int, default=d(None))
    p.add_argument("--cross-check", action="store_true", dest="cross_check", default=d(False))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="derivedmw", description="Certify derived Marsden-Weinstein reductions.")
    _add_global(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("check", help="run the full pipeline and print a summary")
    p.add_argument("file")
    _add_global(p, suppress=True)
    p = sub.add_parser("tor", help="print Tor modules of the level set")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    _add_global(p, suppress=True)
    p = sub.add_parser("report", help="write a machine-readable report")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-")
    _add_global(p, suppress=True)
    p = sub.add_parser("corpus", help="run the shipped scenarios against their golden reports")
    p.add_argument("--dir", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--write-golden", action="store_true")
    p.add_argument("--report-dir", default=None)
    _add_global(p, suppress=True)
    return ap


def _overrides(ns) -> dict:
    return {"order": ns.order, "truncate_weight": ns.truncate_weight, "graded_bound": ns.graded_bound,
            "seed": ns.seed}


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = make_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if ns.command == "corpus":
            if ns.jobs < 1:
                raise ScenarioError("--jobs must be positive")
            return run_corpus(ns.dir, _overrides(ns), ns.jobs, ns.cross_check, ns.write_golden, ns.report_dir,
                              stream=stdout)
        sc = load_scenario(ns.file)
        if ns.command == "tor":
            opts = _merge_options(sc, _overrides(ns))
            bound = ns.max_degree if ns.max_degree is not None else opts["graded_bound"]
            if bound < 0:
                raise ScenarioError("--max-degree must be non-negative")
            K = _koszul_for(sc, opts["order"])
            for i in range(K.r + 1):
                t = tor(K, i)
                dims = t.graded_dimensions(bound)
                shown = "not graded" if dims is None else " ".join(str(d) for d in dims)
                stdout.write(f"tor{i} zero={str(t.is_zero()).lower()} dims[0..{bound}]: {shown}\n")
            return 0
        rep = build_report(sc, _overrides(ns), ns.cross_check)
        if ns.command == "check":
            stdout.write(summary_text(rep))
        else:
            text = dumps(rep)
            if ns.output == "-":
                stdout.write(text)
            else:
                Path(ns.output).write_text(text, encoding="utf-8")
                stdout.write(f"wrote {ns.output}\n")
        return report_exit_code(rep)
    except DerivedMWError as e:
        stderr.write(f"error: {e}\n")
        return 2
    except OSError as e:
        stderr.write(f"error: {e}\n")
        return 2


def _koszul_for(sc: Scenario, order):
    H = sc.space()
    if sc.orbit is None:
        return build_koszul(H.ring, H.moment, sc.mu, order=order)
    S = orbit_mod.build_shifted(H, sc.orbit_presentation(), order)
    return orbit_mod.shifted_koszul(S, order)


def main() -> None:
    raise SystemExit(run_cli(sys.argv[1:]))


__all__ = [
    "Scenario", "load_scenario", "scenario_from_dict", "build_report", "run_cli", "main", "run_corpus",
    "masked", "dumps", "failing_certificates", "report_exit_code", "SCHEMA_VERSION", "CERTIFICATES",
]
