"""Command-line driver: generation checks, Boecherer runs, Hecke reports and pivot tables."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import mpmath

from .cache import CacheError, cache_load, cache_path, cache_store
from .config import RunConfig
from .errors import InvariantViolation

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _even_range(lo: int, hi: int, floor: int) -> list[int]:
    if lo > hi:
        raise UsageError(f"empty weight range {lo}..{hi}")
    return [k for k in range(max(lo, floor), hi + 1) if k % 2 == 0]


def _pmap(cfg: RunConfig, fn, items):
    """Ordered map; thread count only changes scheduling."""
    items = list(items)
    if cfg.threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(cfg.threads) as pool:
        return list(pool.map(fn, items))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_caches(cfg: RunConfig, sources) -> None:
    if cfg.cache_dir is None:
        return
    for src in sources:
        path = cache_path(cfg.cache_dir, src)
        if path.exists():
            try:
                cache_load(path, src)
            except CacheError as e:
                print(f"ignoring cache {path}: {e}", file=sys.stderr)


def _store_caches(cfg: RunConfig, sources) -> None:
    if cfg.cache_dir is None:
        return
    for src in sources:
        cache_store(src, cache_path(cfg.cache_dir, src))


# ---------------------------------------------------------------------------
# commands


def cmd_verify_generators(cfg: RunConfig, kmin: int, kmax: int) -> int:
    from .siegel import verify_generating

    weights = _even_range(kmin, kmax, 4)
    reports = _pmap(cfg, verify_generating, weights)
    failed = False
    for r in reports:
        products = [l for l in r.witness if "·" in l]
        status = "ok" if r.ok else "FAILED"
        print(f"k={r.weight} {status} rank={r.rank} dim={r.dim} products: {', '.join(products) or '-'}")
        failed |= not r.ok
    return EXIT_FAILED if failed else EXIT_OK


def _boecherer_csv(runs) -> str:
    """Columns weight, D, c_prime, eta_over_B, eta_tilde_over_B, then the eigenform label and bookkeeping."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "D", "c_prime", "eta_over_B", "eta_tilde_over_B", "label", "embedding", "kappa", "note"])
    for label, run in runs:
        for r in run.rows:
            if r.skipped:
                w.writerow([run.weight, r.D, "", "", "", label, run.embedding, "", r.reason or "skipped"])
                continue
            w.writerow(
                [
                    run.weight,
                    r.D,
                    mpmath.nstr(r.c_prime.value, min(16, r.c_prime.digits())),
                    mpmath.nstr(r.eta_over_B.value, 6),
                    mpmath.nstr(r.eta_tilde_over_B.value, 6),
                    label,
                    run.embedding,
                    r.kappa,
                    "",
                ]
            )
    return buf.getvalue()


def cmd_boecherer(cfg: RunConfig, weight: int, dmax: int, kappa_file: str | None, out: str | None) -> int:
    from .hecke import eigenforms, product_basis
    from .lseries import boecherer_run, eigenform_label, fundamental_discriminants, kappa_for, read_kappa_table

    if weight % 2 or weight < 20:
        raise UsageError("weight must be even and at least 20")
    if dmax < 3:
        raise UsageError("dmax must be at least 3")
    table = read_kappa_table(Path(kappa_file).read_text()) if kappa_file else None
    sources = product_basis(weight).sources
    _load_caches(cfg, sources)
    discs = fundamental_discriminants(-dmax)
    runs = []
    for f in eigenforms(weight):
        label = eigenform_label(f)
        kappa = kappa_for(f, table)
        if kappa is None:
            print(f"{label}: no correction factor on file, using kappa = 1", file=sys.stderr)
        run = boecherer_run(f, cfg.P, cfg.N, cfg.P2, cfg.N2, discs, kappa, cfg.bits)
        runs.append((label, run))
    _store_caches(cfg, sources)

    verdict_failed = False
    for label, run in runs:
        for kind in ("eta", "eta_tilde"):
            ok, iv = run.intersection(kind)
            shown = f"[{mpmath.nstr(iv.lo, 12)}, {mpmath.nstr(iv.hi, 12)}]" if ok else "empty"
            print(f"{label} embedding={run.embedding} {kind}: intersection {shown}")
            verdict_failed |= kind == "eta" and not ok
    _emit(_boecherer_csv(runs), out)
    return EXIT_FAILED if verdict_failed else EXIT_OK


def cmd_irreducibility(cfg: RunConfig, kmin: int, kmax: int) -> int:
    from .hecke import split_charpoly

    splits = _pmap(cfg, split_charpoly, _even_range(kmin, kmax, 10))
    for s in splits:
        if s.sprime.degree == 0:
            verdict = "empty"
        else:
            verdict = "irreducible" if s.sprime_irreducible else "reducible"
        facs = " * ".join(f"({p})" + (f"^{m}" if m > 1 else "") for p, m in s.sprime_factors)
        print(f"k={s.weight} deg={s.sprime.degree} {verdict} {facs}")
    return EXIT_OK


def _pivot_table(cfg: RunConfig, weights: list[int]) -> dict[int, int]:
    from .siegel import pivot_max_discriminant

    return dict(zip(weights, _pmap(cfg, pivot_max_discriminant, weights)))


def cmd_pivots(cfg: RunConfig, weights: list[int], out: str | None) -> int:
    from .siegel import pivots_csv

    if any(k % 2 or k < 4 for k in weights):
        raise UsageError("weights must be even and at least 4")
    _emit(pivots_csv(_pivot_table(cfg, weights)), out)
    return EXIT_OK


GNUPLOT_SCRIPT = """set datafile separator ','
set key off
set xlabel 'log k'
set ylabel 'log maxD'
set terminal pngcairo size 800,600
set output '{png}'
plot '{csv}' every ::1 using 1:2 with points pointtype 7
"""


def cmd_plot_pivots(cfg: RunConfig, weights: list[int], outfile: str) -> int:
    from .siegel import loglog_csv

    table = {k: v for k, v in _pivot_table(cfg, weights).items() if v > 0}
    if len(table) < 2:
        raise UsageError("need at least two weights with a positive cutoff")
    csv_path = Path(outfile)
    csv_path.write_text(loglog_csv(table))
    script = csv_path.with_suffix(".gp")
    script.write_text(GNUPLOT_SCRIPT.format(png=csv_path.with_suffix(".png").name, csv=csv_path.name))
    print(f"wrote {csv_path} and {script}")
    return EXIT_OK


def cmd_coordinates(cfg: RunConfig, weight: int) -> int:
    from .hecke import coordinates_report

    reports = coordinates_report(weight)
    if not reports:
        print(f"k={weight}: no eigenforms outside the lifted part")
    for r in reports:
        print(f"k={weight} T(2) eigenvalue {r.eigenvalue}")
        print(f"  zero coordinates at positions {r.zero_pattern or 'none'}; largest prime {r.largest_prime}")
        for label, c, fac in zip(r.labels, r.coordinates, r.factored):
            print(f"  {label:>16}  {c}  = {fac}")
    return EXIT_OK


def cmd_eigenvalues(cfg: RunConfig, weight: int, primes: list[int], out: str | None) -> int:
    from .hecke import eigenforms, lambda_via_action
    from .lseries import eigenform_label

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "constituent", "embedding", "p", "lambda_p", "embedded"])
    for f in eigenforms(weight):
        for p in primes:
            v = lambda_via_action(f, p)
            exact = str(v.rational()) if f.is_rational else str(v).strip("[]")
            w.writerow([weight, eigenform_label(f), f.embedding, p, exact, mpmath.nstr(f.embed(v, cfg.bits).value, 20)])
    _emit(buf.getvalue(), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _weights(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip("-"):
            lo, hi = part.split("-", 1)
            out.extend(k for k in range(int(lo), int(hi) + 1) if k % 2 == 0)
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegelgen", description=__doc__)
    ap.add_argument("--cache-dir")
    ap.add_argument("--bits", type=int)
    ap.add_argument("--threads", type=int)
    for name in ("P", "N", "P2", "N2"):
        ap.add_argument(f"--{name}", type=int, dest=name)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-generators", help="check that lifts and their products span each weight")
    p.add_argument("--min-weight", type=int, default=4)
    p.add_argument("--max-weight", type=int, default=34)

    p = sub.add_parser("boecherer", help="central-value constants c' with error intervals")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--dmax", type=int, default=40)
    p.add_argument("--kappa-table")
    p.add_argument("--out")

    p = sub.add_parser("irreducibility", help="factor the T(2) polynomial on the non-lift cusp forms")
    p.add_argument("--kmin", type=int, default=20)
    p.add_argument("--kmax", type=int, default=30)

    p = sub.add_parser("pivots", help="weight,maxD table of pivot discriminant cutoffs")
    p.add_argument("--weights", type=_weights, required=True, help="e.g. 100,102,104 or 20-40")
    p.add_argument("--out")

    p = sub.add_parser("plot-pivots", help="log-log point cloud CSV and a gnuplot script")
    p.add_argument("--weights", type=_weights, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("coordinates", help="eigenform coordinates in the product basis")
    p.add_argument("--weight", type=int, required=True)

    p = sub.add_parser("eigenvalues", help="T(p) eigenvalues per eigenform as CSV")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--primes", type=_weights, default=[2, 3, 5, 7])
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_env(
            cache_dir=args.cache_dir, bits=args.bits, threads=args.threads, P=args.P, N=args.N, P2=args.P2, N2=args.N2
        )
        match args.command:
            case "verify-generators":
                return cmd_verify_generators(cfg, args.min_weight, args.max_weight)
            case "boecherer":
                return cmd_boecherer(cfg, args.weight, args.dmax, args.kappa_table, args.out)
            case "irreducibility":
                return cmd_irreducibility(cfg, args.kmin, args.kmax)
            case "pivots":
                return cmd_pivots(cfg, args.weights, args.out)
            case "plot-pivots":
                return cmd_plot_pivots(cfg, args.weights, args.out)
            case "coordinates":
                return cmd_coordinates(cfg, args.weight)
            case "eigenvalues":
                return cmd_eigenvalues(cfg, args.weight, args.primes, args.out)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
