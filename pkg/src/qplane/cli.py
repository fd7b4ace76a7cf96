"""Command-line front end.

Commands: table, certify, plot, oracle, estimate-delta, entry.
Exit codes: 0 success / verdict true, 1 verdict false or failed checks,
2 usage, 3 numerical failure.  All artifacts are byte-deterministic for
a fixed config: fixed seeds, fixed summation orders, 17-significant-digit
CSV floats and shortest-round-trip JSON floats.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds, certify, oracle, phi, qmatrix, spectrum
from .quad import ToleranceError

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    k_list: list[int] = field(default_factory=list)
    m_top: int = 5
    delta: float = 1e-13
    tol_eig: float = 1e-14
    phi_mode: str = "stable"
    output_dir: str = "."
    formats: tuple[str, ...] = ("csv", "json")

    def validate(self):
        if not self.k_list:
            raise ValueError("k list must be nonempty")
        if self.m_top < 1 or self.delta <= 0.0 or self.tol_eig <= 0.0:
            raise ValueError("tolerances and counts must be positive")
        if self.phi_mode not in ("stable", "naive"):
            raise ValueError(f"unknown phi mode {self.phi_mode!r}")
        bad = set(self.formats) - {"csv", "json", "svg"}
        if bad:
            raise ValueError(f"unknown formats {sorted(bad)}")


def parse_k_list(text: str) -> list[int]:
    """Comma-separated entries, each an integer or an inclusive a..b range."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def load_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path) as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def merge_config(args: argparse.Namespace) -> RunConfig:
    file_vals = load_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig()

    def pick(flag_name: str, file_key: str, conv, current):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return conv(flag) if isinstance(flag, str) else flag
        if file_key in file_vals:
            return conv(file_vals[file_key])
        return current

    if getattr(args, "k", None) is not None:
        cfg.k_list = [args.k]
    else:
        cfg.k_list = pick("k_list", "k_list", parse_k_list, cfg.k_list)
    cfg.m_top = pick("m_top", "m_top", int, cfg.m_top)
    cfg.delta = pick("delta", "delta", float, cfg.delta)
    cfg.tol_eig = pick("tol", "tol", float, cfg.tol_eig)
    cfg.phi_mode = pick("phi_mode", "phi_mode", str, cfg.phi_mode)
    cfg.output_dir = pick("out", "out", str, cfg.output_dir)
    fmt = pick("format", "format", str, None)
    if fmt is not None:
        cfg.formats = tuple(s.strip() for s in fmt.split(",") if s.strip())
    return cfg


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _write_json(path: str, obj) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(obj, f, sort_keys=True, indent=2)
        f.write("\n")


# --- table --------------------------------------------------------------------

def compute_table(cfg: RunConfig) -> dict:
    rows = []
    errors = []
    for k in cfg.k_list:
        try:
            Q = qmatrix.build(qmatrix.IndexWindow(k), "binary64", cfg.phi_mode)
            m = min(cfg.m_top, Q.n)
            res = spectrum.top_eigs(Q, m, tol=cfg.tol_eig)
            lam_min, _, rmin, it_min = spectrum.min_eig_pair(Q, tol=cfg.tol_eig)
            rows.append({
                "k": k,
                "eigenvalues": res.eigenvalues,
                "residuals": res.residuals,
                "iterations": res.iterations,
                "lambda_min": lam_min,
                "min_residual": rmin,
                "min_iterations": it_min,
                "exceeds_one": [bool(v > 1.0) for v in res.eigenvalues],
            })
        except Exception as exc:  # isolate per-k failures, keep the run going
            errors.append({"k": k, "error": f"{type(exc).__name__}: {exc}"})
    return {"rows": rows, "errors": errors,
            "config": {"m_top": cfg.m_top, "tol": cfg.tol_eig,
                       "phi_mode": cfg.phi_mode}}


def write_table_csv(table: dict, m_top: int, path: str) -> None:
    cols = (["k"] + [f"lambda_{i+1}" for i in range(m_top)] + ["lambda_min"]
            + [f"residual_{i+1}" for i in range(m_top)] + ["residual_min"])
    with open(path, "w", newline="\n") as f:
        f.write(",".join(cols) + "\n")
        for row in table["rows"]:
            vals = [str(row["k"])]
            lams = row["eigenvalues"]
            vals += [_fmt(v) for v in lams] + [""] * (m_top - len(lams))
            vals.append(_fmt(row["lambda_min"]))
            res = row["residuals"]
            vals += [_fmt(v) for v in res] + [""] * (m_top - len(res))
            vals.append(_fmt(row["min_residual"]))
            f.write(",".join(vals) + "\n")


def cmd_table(args) -> int:
    cfg = merge_config(args)
    cfg.validate()
    table = compute_table(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    if "csv" in cfg.formats:
        write_table_csv(table, cfg.m_top, os.path.join(cfg.output_dir, "table.csv"))
    if "json" in cfg.formats:
        _write_json(os.path.join(cfg.output_dir, "table.json"), table)
    for row in table["rows"]:
        marks = ["*" if b else " " for b in row["exceeds_one"]]
        lams = " ".join(f"{v:.6f}{m}" for v, m in zip(row["eigenvalues"], marks))
        print(f"k={row['k']:>6} {lams} | min {row['lambda_min']:.7f}")
    for err in table["errors"]:
        print(f"k={err['k']}: FAILED {err['error']}", file=sys.stderr)
    return EXIT_OK if not table["errors"] else EXIT_NUMERICAL


# --- certify --------------------------------------------------------------------

def cmd_certify(args) -> int:
    cfg = merge_config(args)
    if len(cfg.k_list) != 1:
        print("certify expects exactly one k", file=sys.stderr)
        return EXIT_USAGE
    k = cfg.k_list[0]
    try:
        verdict = certify.certify_counterexample(
            k, delta=cfg.delta, phi_mode=cfg.phi_mode, tol=cfg.tol_eig)
    except certify.AssumptionError as exc:
        diag = {"error": "assumption_violation", "flag": exc.flag,
                "detail": str(exc)}
        if exc.ledger is not None:
            diag["ledger"] = exc.ledger.to_json()
        print(json.dumps(diag, sort_keys=True, indent=2))
        return EXIT_NUMERICAL
    except (spectrum.NonConvergenceError, ToleranceError) as exc:
        print(json.dumps({"error": "numerical_failure", "detail": str(exc)},
                         sort_keys=True, indent=2))
        return EXIT_NUMERICAL
    print(verdict.dumps())
    return EXIT_OK if verdict.exceeded_one else EXIT_FALSE


# --- plot -----------------------------------------------------------------------

def _svg_plot(ks: list[int], lams: list[float], path: str) -> None:
    w, h = 800, 500
    ml, mr, mt, mb = 70, 20, 20, 50
    x0, x1 = min(ks), max(ks)
    y0 = min(min(lams), 0.999)
    y1 = max(max(lams), 1.001)
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(k):
        t = 0.5 if x1 == x0 else (k - x0) / (x1 - x0)
        return ml + t * (w - ml - mr)

    def sy(v):
        t = (v - y0) / (y1 - y0)
        return h - mb - t * (h - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{ml}" y1="{h-mb}" x2="{w-mr}" y2="{h-mb}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{h-mb}" stroke="black"/>',
        f'<text x="{(ml+w-mr)//2}" y="{h-12}" text-anchor="middle" '
        f'font-size="14">k</text>',
        f'<text x="18" y="{(mt+h-mb)//2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {(mt+h-mb)//2})">largest eigenvalue</text>',
    ]
    ty = sy(1.0)
    if mt <= ty <= h - mb:
        parts.append(f'<line x1="{ml}" y1="{ty:.3f}" x2="{w-mr}" y2="{ty:.3f}" '
                     f'stroke="red" stroke-dasharray="6,4"/>')
        parts.append(f'<text x="{w-mr-4}" y="{ty-6:.3f}" text-anchor="end" '
                     f'fill="red" font-size="13">threshold 1</text>')
    pts = " ".join(f"{sx(k):.3f},{sy(v):.3f}" for k, v in zip(ks, lams))
    if len(ks) > 1:
        parts.append(f'<polyline points="{pts}" fill="none" stroke="blue" '
                     f'stroke-width="1.5"/>')
    for k, v in zip(ks, lams):
        parts.append(f'<circle cx="{sx(k):.3f}" cy="{sy(v):.3f}" r="2.5" '
                     f'fill="blue"/>')
    crossing = None
    for (ka, va), (kb, vb) in zip(zip(ks, lams), zip(ks[1:], lams[1:])):
        if va < 1.0 < vb:
            crossing = (ka, kb)
            break
    if crossing:
        cx = 0.5 * (sx(crossing[0]) + sx(crossing[1]))
        parts.append(f'<line x1="{cx:.3f}" y1="{mt}" x2="{cx:.3f}" y2="{h-mb}" '
                     f'stroke="gray" stroke-dasharray="2,3"/>')
        parts.append(f'<text x="{cx+6:.3f}" y="{mt+16}" font-size="13" '
                     f'fill="gray">crosses 1 between k={crossing[0]} and '
                     f'k={crossing[1]}</text>')
    # axis ticks: k at ends, eigenvalue at 3 levels
    for k in sorted({x0, x1}):
        parts.append(f'<text x="{sx(k):.3f}" y="{h-mb+18}" text-anchor="middle" '
                     f'font-size="12">{k}</text>')
    for v in (y0 + pad, 1.0, y1 - pad):
        parts.append(f'<text x="{ml-6}" y="{sy(v)+4:.3f}" text-anchor="end" '
                     f'font-size="12">{v:.5f}</text>')
    parts.append("</svg>")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(parts) + "\n")


def cmd_plot(args) -> int:
    cfg = merge_config(args)
    cfg.validate()
    ks = sorted(set(cfg.k_list))
    lams = []
    for k in ks:
        Q = qmatrix.build(qmatrix.IndexWindow(k), "binary64", cfg.phi_mode)
        res = spectrum.top_eigs(Q, 1, tol=cfg.tol_eig)
        lams.append(res.eigenvalues[0])
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "lambda1.svg")
    _svg_plot(ks, lams, path)
    print(f"wrote {path}")
    return EXIT_OK


# --- oracle suites ---------------------------------------------------------------

def _suite_phi() -> list[dict]:
    checks = []
    for l in range(-200, 201):
        v = phi.phi_quad(l, 1e-10)
        ref = phi.phi_naive(l)
        checks.append(oracle.make_report(
            "phi_quad_vs_naive", {"l": l}, v, ref, 1e-9))
    return checks


def _suite_entries() -> list[dict]:
    checks = []
    for j in range(-6, 7):
        for k in range(-6, 7):
            c = oracle.c_integral(j, k, 1e-9)
            bjk = oracle.b_integral(j, k, 1e-9)
            bkj = oracle.b_integral(k, j, 1e-9)
            recon = c + bjk - bkj
            ref = qmatrix.entry(j, k)
            checks.append(oracle.make_report(
                "entry_decomposition", {"j": j, "k": k}, recon, ref, 1e-7))
    return checks


_LAMBDA_CELLS = ((5, 5), (0, 1), (2, -3), (0, -1))


def _suite_lambda_trunc() -> list[dict]:
    checks = []
    for (j, k) in _LAMBDA_CELLS:
        ref = qmatrix.entry(j, k)
        gaps = []
        for lam in (50.0, 100.0, 200.0, 400.0):
            v = oracle.entry_via_lambda(j, k, lam, 1e-6)
            gaps.append(abs(v - ref))
            checks.append(oracle.make_report(
                "entry_via_lambda", {"j": j, "k": k, "lambda": lam}, v, ref,
                0.05))
        monotone = all(g2 <= g1 * 1.05 for g1, g2 in zip(gaps, gaps[1:]))
        checks.append({
            "check": "lambda_gap_nonincreasing", "params": {"j": j, "k": k},
            "value": gaps, "reference": None, "gap": None, "tol": None,
            "pass": bool(monotone),
        })
    return checks


def _suite_wigner() -> list[dict]:
    checks = []
    k = 3
    window = qmatrix.IndexWindow(k)
    rng = np.random.default_rng(20231107)
    z = rng.standard_normal(window.n) + 1j * rng.standard_normal(window.n)
    z /= np.linalg.norm(z)
    Q = qmatrix.build(window)
    ref = oracle.quadratic_form(Q.entries, z)
    u = oracle.StepFunction(window, z)
    gaps = []
    for a in (10.0, 20.0, 40.0):
        v = oracle.wigner_rect_integral(u, a)
        gaps.append(abs(v - ref))
        checks.append(oracle.make_report(
            "wigner_rect_vs_quadratic_form", {"k": k, "a": a}, v, ref, 0.25))
    monotone = all(g2 <= g1 for g1, g2 in zip(gaps, gaps[1:]))
    checks.append({
        "check": "wigner_gap_shrinks", "params": {"k": k, "a": [10, 20, 40]},
        "value": gaps, "reference": None, "gap": None, "tol": None,
        "pass": bool(monotone),
    })
    return checks


_SUITES = {
    "phi": _suite_phi,
    "entries": _suite_entries,
    "lambda-trunc": _suite_lambda_trunc,
    "wigner": _suite_wigner,
}


def cmd_oracle(args) -> int:
    suite = args.suite
    try:
        checks = _SUITES[suite]()
    except (ToleranceError, ArithmeticError) as exc:
        print(json.dumps({"error": "numerical_failure", "detail": str(exc)},
                         sort_keys=True, indent=2))
        return EXIT_NUMERICAL
    ok = all(c["pass"] for c in checks)
    report = {"suite": suite, "passed": ok,
              "n_checks": len(checks),
              "n_failed": sum(not c["pass"] for c in checks),
              "checks": checks}
    out = getattr(args, "out", None)
    if out:
        os.makedirs(out, exist_ok=True)
        _write_json(os.path.join(out, f"oracle_{suite}.json"), report)
    print(json.dumps({k: report[k] for k in
                      ("suite", "passed", "n_checks", "n_failed")},
                     sort_keys=True))
    return EXIT_OK if ok else EXIT_FALSE


# --- small commands -----------------------------------------------------------

def cmd_entry(args) -> int:
    mode = args.phi_mode or "stable"
    v = qmatrix.entry(args.j, args.k, mode)
    print(f"a[{args.j},{args.k}] = {_fmt(v.real)} {'+' if v.imag >= 0 else '-'} "
          f"{_fmt(abs(v.imag))} i")
    return EXIT_OK


def cmd_estimate_delta(args) -> int:
    cfg = merge_config(args)
    if len(cfg.k_list) != 1:
        print("estimate-delta expects exactly one k", file=sys.stderr)
        return EXIT_USAGE
    k = cfg.k_list[0]
    est = certify.estimate_delta(k, cfg.phi_mode)
    print(json.dumps({"k": k, "phi_mode": cfg.phi_mode, "delta_estimate": est},
                     sort_keys=True))
    return EXIT_OK


# --- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qplane",
        description="certified spectral verifier for the quarter-plane "
                    "Wigner matrix")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_k=True):
        if with_k:
            sp.add_argument("--k", type=int, default=None)
            sp.add_argument("--k-list", dest="k_list", type=str, default=None)
        sp.add_argument("--m-top", dest="m_top", type=int, default=None)
        sp.add_argument("--delta", type=float, default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--phi-mode", dest="phi_mode",
                        choices=["naive", "stable"], default=None)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--format", type=str, default=None)
        sp.add_argument("--config", type=str, default=None)

    sp = sub.add_parser("table", help="eigenvalue table for a list of k")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("certify", help="certified spectral-radius verdict")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("plot", help="largest-eigenvalue curve as SVG")
    common(sp)
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("oracle", help="independent quadrature check suites")
    sp.add_argument("--suite", choices=sorted(_SUITES), required=True)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("estimate-delta",
                        help="dual-precision entrywise error estimate")
    common(sp)
    sp.set_defaults(func=cmd_estimate_delta)

    sp = sub.add_parser("entry", help="print one matrix entry")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--phi-mode", dest="phi_mode",
                    choices=["naive", "stable"], default=None)
    sp.set_defaults(func=cmd_entry)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (certify.AssumptionError, spectrum.NonConvergenceError,
            ToleranceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
