"""Command line driver.  Exit codes: 0 ok, 2 config error, 3 math precondition, 4 mismatch."""
from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, LadderBlock, load_config
from .errors import ConfigError, MismatchFound, WeilHeightsError
from .experiments import (PRESETS, Artifacts, ladder_from_config, parse_ladder, preset_config, run_enumerate,
                          run_peyre, run_restriction_check, run_schanuel, run_tamagawa_check, bt_experiment,
                          field_from_config, variety_polys)
from .fitting import fit_asymptotic
from .outputs import emit_outputs, ledger_text, read_series_csv

DEFAULT_PRESET = {"enumerate": "schanuel-p1", "fit": "schanuel-p1", "restrict": "restriction-check",
                  "peyre": "schanuel-p1", "check-restriction": "restriction-check",
                  "check-tamagawa": "tamagawa-check", "bt-experiment": "bt"}


def _parser():
    p = argparse.ArgumentParser(prog="weilheights", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in DEFAULT_PRESET:
        s = sub.add_parser(name)
        s.add_argument("--config", metavar="PATH")
        s.add_argument("--preset", metavar="NAME", choices=sorted(PRESETS))
        s.add_argument("--bmax", type=int)
        s.add_argument("--ladder", metavar="B0:factor:rungs")
        s.add_argument("--seed", type=int)
        s.add_argument("--prime-cutoff", type=int)
        s.add_argument("--mc-samples", type=int)
        s.add_argument("--out", metavar="DIR")
        s.add_argument("--timing", action="store_true")
        if name == "fit":
            s.add_argument("--input", metavar="CSV", help="fit an existing B,count series")
            s.add_argument("--mode", choices=["free", "fix_a"])
            s.add_argument("--a", help="pinned exponent for fix_a")
    return p


def _config(args) -> ExperimentConfig:
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset")
    cfg = load_config(args.config) if args.config else preset_config(args.preset or DEFAULT_PRESET[args.command])
    if args.seed is not None:
        cfg.seed = args.seed
    if args.prime_cutoff is not None:
        cfg.cutoffs.prime_cutoff = args.prime_cutoff
    if args.mc_samples is not None:
        cfg.cutoffs.mc_samples = args.mc_samples
    if args.timing:
        cfg.output.timing = True
    if args.out:
        cfg.output.dir = args.out
    return cfg


def _ladder(args, cfg):
    if args.ladder:
        lad = parse_ladder(args.ladder)
        if args.bmax:
            lad = [B for B in lad if B < args.bmax] + [args.bmax]
        return lad
    if args.bmax:
        lb = cfg.ladder
        cfg.ladder = LadderBlock(lb.b0, lb.factor, lb.rungs, args.bmax)
        return [B for B in ladder_from_config(cfg) if B <= args.bmax]
    return None


def _emit(art: Artifacts, cfg, args):
    if args.out:
        for path in emit_outputs(art.files, args.out, cfg.output.prefix):
            print(path)
    else:
        for name in sorted(art.files):
            if name.endswith(".svg"):
                continue
            sys.stdout.write(f"== {name}\n{art.files[name]}")


def cmd_enumerate(args, cfg):
    return run_enumerate(cfg, _ladder(args, cfg))


def cmd_fit(args, cfg):
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            series = read_series_csv(fh.read())
        mode = args.mode or cfg.fit.mode
        a = float(args.a if args.a is not None else (cfg.fit.a or 0)) if mode == "fix_a" else None
        fit = fit_asymptotic(series, mode, a=a)
        rows = [(k, v) for k, v in fit.as_dict().items() if k not in ("window", "predicted")]
        rows.append(("window", " ".join(map(str, fit.window))))
        return Artifacts({"fit.txt": ledger_text("fit", rows)}, {"fit": fit})
    if args.mode:
        cfg.fit.mode = args.mode
    if args.a:
        cfg.fit.a = args.a
    return run_schanuel(cfg, _ladder(args, cfg))


def cmd_restrict(args, cfg):
    from .weilres import ExtensionData, PolynomialSystem, restrict_projective
    F = field_from_config(cfg)
    ambient, names, eqs, nz = variety_polys(cfg, F)
    ext = ExtensionData.over_Q(F)
    if not ambient:
        raise ConfigError("variety.ambient is empty")
    kind = "projective" if len(ambient) == 1 else "multiprojective"
    sys_ = PolynomialSystem(F, names, eqs, kind, [n + 1 for n in ambient], nz)
    res = restrict_projective(sys_, ext)
    out = []
    for chart in sorted(res.charts):
        comp = res.charts[chart]
        out.append(f"# chart {chart}: {comp.nvars} variables, {len(comp.equations)} equations")
        out.append(comp.dump())
    return Artifacts({"restriction.txt": "\n".join(out) + "\n"}, {"charts": len(res.charts)})


def cmd_peyre(args, cfg):
    return run_peyre(cfg)


def cmd_check_restriction(args, cfg):
    art = run_restriction_check(cfg, _ladder(args, cfg))
    if not art.ok:
        _emit(art, cfg, args)
        bad = [B for B, a, b in zip(art.report["ladder"], art.report["F_counts"], art.report["E_counts"]) if a != b]
        raise MismatchFound("N(X, B) and N(Res X, B) differ", witness=bad[:1] or None)
    return art


def cmd_check_tamagawa(args, cfg):
    art = run_tamagawa_check(cfg)
    if not art.ok:
        _emit(art, cfg, args)
        raise MismatchFound("tau(X) and tau(Res X) disagree beyond tolerance and error bars",
                            witness=art.report["relative_difference"])
    return art


def cmd_bt(args, cfg):
    return bt_experiment(cfg)


COMMANDS = {"enumerate": cmd_enumerate, "fit": cmd_fit, "restrict": cmd_restrict, "peyre": cmd_peyre,
            "check-restriction": cmd_check_restriction, "check-tamagawa": cmd_check_tamagawa,
            "bt-experiment": cmd_bt}


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        art = COMMANDS[args.command](args, cfg)
        _emit(art, cfg, args)
    except WeilHeightsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
