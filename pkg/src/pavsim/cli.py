"""Headless command-line front end.

Mirrors the historical flag surface (including the ``--lamda`` spelling and
the per-stimulus ``--alpha-A`` .. ``--saliences-Z`` flags).  Command-line
parameters override ``@`` parameters from the experiment file, which override
model defaults.

Exit codes: 0 success, 1 parse/validation failure, 2 I/O failure.
"""
from __future__ import annotations

import argparse
import string
import sys
import tempfile

from .config import resolve_parameters
from .dsl import ParseError, parse_rw_file
from .engine import ValidationError, run_experiment
from .export import PlotOptions, export_csv, render_phase_plots
from .models import MODEL_NAMES

# Flags accepted for compatibility but without a governing update rule.
_IGNORED_FLAGS = ("xi_hall", "habituation", "rho", "nu", "kay")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pavsim",
        description="Pavlovian conditioning simulator CLI",
        allow_abbrev=False,
    )
    parser.add_argument("experiment_file", nargs="?", help="Path to the .rw experiment file.")

    out = parser.add_argument_group("Output parameters")
    out.add_argument("--savefig", metavar="filename",
                     help="Save one image per phase as filename_1.png ... filename_n.png.")
    out.add_argument("--print-results", action="store_true",
                     help="Print the result CSV to stdout.")
    out.add_argument("--save-results", metavar="filename",
                     help="Save the result CSV to a file.")
    out.add_argument("--singular-legend", action="store_true",
                     help="Omit the legend from plots and save it separately as filename_legend.png.")
    out.add_argument("--show-title", action="store_true", help="Add titles to saved plots.")
    out.add_argument("--dpi", type=int, default=100, help="Dots per inch.")
    out.add_argument("--output-width", type=float, default=8.0, help="Width of the output figures.")

    plot = parser.add_argument_group("Plotting parameters")
    plot.add_argument("--plot-phase", type=int, metavar="phase_num", help="Plot a single phase.")
    plot.add_argument("--plot-experiments", nargs="*", metavar="group",
                      help="List of groups to plot.")
    plot.add_argument("--plot-stimuli", nargs="*", metavar="conditioned_stimulus",
                      help="List of stimuli, compound and simple, to plot.")
    plot.add_argument("--plot-alpha", action=argparse.BooleanOptionalAction, default=False,
                      help="Plot the learning rate instead of associative strength.")
    plot.add_argument("--plot-macknhall", action=argparse.BooleanOptionalAction, default=False,
                      help="Plot the two attentional rates of the hybrid model.")
    plot.add_argument("--plot-alphas", action=argparse.BooleanOptionalAction, default=False,
                      help="Plot all learning-rate series.")
    plot.add_argument("--part-stimuli", action=argparse.BooleanOptionalAction, default=False,
                      help="Additionally plot per-trial-type series.")

    exp = parser.add_argument_group("Experiment Parameters")
    exp.add_argument("--adaptive-type", choices=MODEL_NAMES, metavar="model",
                     help="Model to simulate: " + ", ".join(MODEL_NAMES))
    exp.add_argument("--alpha", type=float, help="Learning rate for all other stimuli.")
    exp.add_argument("--alpha-mack", type=float, help="Attentional rate for all other stimuli.")
    exp.add_argument("--alpha-hall", type=float, help="Salience rate for all other stimuli.")
    exp.add_argument("--beta", type=float, help="Associability of the present US.")
    exp.add_argument("--beta-neg", type=float, help="Associability of the absent US.")
    exp.add_argument("--lamda", type=float, help="Asymptote of learning.")
    exp.add_argument("--gamma", type=float, help="Recency weight of the error-tracking rate.")
    exp.add_argument("--thetaE", type=float, help="Attention-change rate for excitatory updates.")
    exp.add_argument("--thetaI", type=float, help="Attention-change rate for inhibitory updates.")
    exp.add_argument("--salience", type=float, help="Salience for stimuli without their own.")
    exp.add_argument("--decay", type=float, help="Exposure decay of the unified variable rate.")
    exp.add_argument("--num-trials", type=int, help="Number of runs averaged in randomized phases.")
    exp.add_argument("--configural-cues", action=argparse.BooleanOptionalAction, default=None,
                     help="Whether compounds form configural cues.")
    exp.add_argument("--max-workers", type=int, default=1,
                     help="Maximum number of worker processes for randomized phases.")
    exp.add_argument("--seed", type=int, default=0, help="Random seed for randomized phases.")

    legacy = parser.add_argument_group("Compatibility parameters (parsed and ignored)")
    legacy.add_argument("--xi-hall", type=float, help=argparse.SUPPRESS)
    legacy.add_argument("--habituation", type=float, help=argparse.SUPPRESS)
    legacy.add_argument("--rho", type=float, help=argparse.SUPPRESS)
    legacy.add_argument("--nu", type=float, help=argparse.SUPPRESS)
    legacy.add_argument("--kay", type=float, help=argparse.SUPPRESS)

    for letter in string.ascii_uppercase:
        parser.add_argument(f"--alpha-{letter}", type=float, help=argparse.SUPPRESS,
                            dest=f"alpha_cs_{letter}")
        parser.add_argument(f"--alpha_mack-{letter}", type=float, help=argparse.SUPPRESS,
                            dest=f"alpha_mack_cs_{letter}")
        parser.add_argument(f"--alpha_hall-{letter}", type=float, help=argparse.SUPPRESS,
                            dest=f"alpha_hall_cs_{letter}")
        parser.add_argument(f"--saliences-{letter}", type=float, help=argparse.SUPPRESS,
                            dest=f"salience_cs_{letter}")
        parser.add_argument(f"--habituations-{letter}", type=float, help=argparse.SUPPRESS,
                            dest=f"habituation_cs_{letter}")
    return parser


def _flag_parameter_map(args: argparse.Namespace) -> dict[str, object]:
    mapping: dict[str, object] = {}
    direct = {
        "alpha": "alpha",
        "alpha_mack": "alpha_mack",
        "alpha_hall": "alpha_hall",
        "beta": "beta",
        "beta_neg": "betan",
        "lamda": "lambda",
        "gamma": "gamma",
        "thetaE": "thetaE",
        "thetaI": "thetaI",
        "salience": "salience",
        "decay": "decay",
        "num_trials": "num_trials",
    }
    for attr, key in direct.items():
        value = getattr(args, attr)
        if value is not None:
            mapping[key] = value
    if args.configural_cues is not None:
        mapping["configural_cues"] = args.configural_cues
    for letter in string.ascii_uppercase:
        for prefix in ("alpha", "alpha_mack", "alpha_hall", "salience"):
            value = getattr(args, f"{prefix}_cs_{letter}")
            if value is not None:
                mapping[f"{prefix}_{letter}"] = value
    return mapping


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    for flag in _IGNORED_FLAGS:
        if getattr(args, flag) is not None:
            print(f"warning: --{flag.replace('_', '-')} has no governing equation; ignored",
                  file=sys.stderr)
    for letter in string.ascii_uppercase:
        if getattr(args, f"habituation_cs_{letter}") is not None:
            print(f"warning: --habituations-{letter} has no governing equation; ignored",
                  file=sys.stderr)

    try:
        if args.experiment_file:
            try:
                with open(args.experiment_file, encoding="utf-8") as handle:
                    content = handle.read()
            except OSError as exc:
                print(f"error: cannot read {args.experiment_file}: {exc}", file=sys.stderr)
                return 2
            spec = parse_rw_file(content)
        else:
            spec = parse_rw_file("")

        model_name = args.adaptive_type or spec.model_name or "Rescorla Wagner"
        params, warnings = resolve_parameters(
            model_name, spec.parameters, _flag_parameter_map(args)
        )
        for message in warnings:
            print(f"warning: {message}", file=sys.stderr)

        result = run_experiment(
            spec, params, model_name, seed=args.seed, max_workers=args.max_workers
        )
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    table = export_csv(result)
    try:
        if args.print_results:
            sys.stdout.write(table.to_csv())
        if args.save_results:
            with open(args.save_results, "w", encoding="utf-8", newline="") as handle:
                handle.write(table.to_csv())
        if args.savefig or not (args.print_results or args.save_results):
            base = args.savefig
            if base is None:
                # Headless stand-in for popping up one window per phase.
                base = tempfile.mkdtemp(prefix="pavsim_") + "/plot"
            options = PlotOptions(
                plot_alpha=args.plot_alpha or args.plot_alphas,
                plot_macknhall=args.plot_macknhall,
                plot_trial_type_data=args.part_stimuli,
                separate_legend=args.singular_legend,
                show_title=args.show_title,
                width=args.output_width,
                height=args.output_width * 0.625,
                dpi=args.dpi,
                groups=tuple(args.plot_experiments) if args.plot_experiments else None,
                stimuli=tuple(args.plot_stimuli) if args.plot_stimuli else None,
            )
            if args.plot_phase is not None:
                # Render everything, report only the requested phase.
                paths = render_phase_plots(result, base, options)
                paths = [p for p in paths if p.endswith(f"_{args.plot_phase}.png")]
            else:
                paths = render_phase_plots(result, base, options)
            for path in paths:
                print(path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
