import argparse
import logging
import os
import sys
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional

from dotenv import load_dotenv

from core.config import get_settings, load_run_file, reload_settings
from core.experiment_loader import ExperimentLoader
from core.log_formatter import EnhancedLogFormatter, configure_file_logging
from core.utils import DGSiacError, ensure_output_directory

dotenv_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), '.env')
load_dotenv(dotenv_path=dotenv_path)

reload_settings()

logging.basicConfig(
    level=get_settings().log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

configure_file_logging()

COMMANDS = ('converge', 'cfl-sweep', 'timing', 'dump')

# CLI flag -> run configuration key
RUN_FLAGS = {
    'problem': 'Problem: linear, variable or burgers',
    'degrees': 'Comma separated polynomial degrees, e.g. 2,3,4',
    'resolutions': 'Comma separated element counts, e.g. 20,40,80,160',
    'cfl': 'CFL number for every degree',
    'cfl_by_degree': 'Per-degree CFL numbers, e.g. 1:0.1,2:0.01',
    'cfls': 'Comma separated CFL numbers for cfl-sweep',
    'final_time': 'Final time T',
    'integrator': 'rk3, rk4, sdg, sdc, adaptive-sdg or adaptive-sdc',
    'iterations': 'Correction sweeps K for sdg/sdc (default 2p)',
    'variant': 'SDC node-0 handling: corrected or literal',
    'epsilon': 'Stopping tolerance of adaptive integrators',
    'kmax': 'Sweep cap of adaptive integrators (default 2p)',
    'precision': 'standard or extended',
    'output': 'CSV (or solution dump) path',
    'pointwise_output': 'Pointwise error CSV path; may contain {degree} and {cells}',
    'workers': 'Convergence rows computed concurrently',
    'rk3_budget_seconds': 'Wall-clock cap per RK3 timing run',
}


def safe_print(text):
    try:
        print(text, file=sys.stderr)
    except UnicodeEncodeError:
        print(text.encode('ascii', errors='replace').decode(), file=sys.stderr)


def configure_safe_logging():
    class SafeEnhancedFormatter(EnhancedLogFormatter):
        """Enhanced ASCII formatter with additional Windows safety."""
        def format(self, record):
            try:
                return super().format(record)
            except UnicodeEncodeError:
                # Fallback to ASCII-safe formatting
                service_prefix = self._get_ascii_prefix(record.name, record.levelname)
                safe_msg = str(record.getMessage()).encode('ascii', errors='replace').decode('ascii')
                return f"{service_prefix} {safe_msg}"

    # Replace all console handlers' formatters with safe enhanced ones
    for handler in logging.root.handlers:
        # Only apply to console/stream handlers, keep file handlers as-is
        if isinstance(handler, logging.StreamHandler) and getattr(handler.stream, 'name', None) in ['<stderr>', '<stdout>']:
            safe_formatter = SafeEnhancedFormatter(use_colors=sys.stderr.isatty())
            handler.setFormatter(safe_formatter)


def build_parser() -> argparse.ArgumentParser:
    run_options = argparse.ArgumentParser(add_help=False)
    run_options.add_argument('--config', help='key=value run configuration file')
    run_options.add_argument('--preset', help='Experiment preset from core/experiments.yaml')
    for key, help_text in RUN_FLAGS.items():
        run_options.add_argument(f"--{key.replace('_', '-')}", dest=key, help=help_text)
    run_options.add_argument('--wallclock', dest='wallclock', action='store_const', const='true',
                             help='Report wall-clock seconds (default)')
    run_options.add_argument('--no-wallclock', dest='wallclock', action='store_const', const='false',
                             help='Leave the seconds column empty so CSV output is deterministic')

    parser = argparse.ArgumentParser(description='DG solver with SDG/SDC time stepping and SIAC post-processing')
    parser.add_argument('--list-presets', action='store_true', help='List experiment presets and exit')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.add_parser('converge', parents=[run_options], help='Convergence table with DG and filtered errors')
    subparsers.add_parser('cfl-sweep', parents=[run_options], help='Errors versus CFL number')
    subparsers.add_parser('timing', parents=[run_options], help='Cost of RK3 versus SDG/SDC')
    subparsers.add_parser('dump', parents=[run_options], help='Write the final DG solution')
    return parser


def collect_run_values(args: argparse.Namespace) -> List[Optional[Dict[str, object]]]:
    """Environment defaults, preset, run file and CLI flags, in increasing priority."""
    settings = get_settings()
    defaults = {
        'precision': settings.precision,
        'workers': settings.workers,
        'rk3_budget_seconds': settings.rk3_budget_seconds,
    }
    preset = ExperimentLoader().resolve_preset(args.preset) if args.preset else None
    run_file = load_run_file(args.config) if args.config else None
    flags = {key: getattr(args, key) for key in [*RUN_FLAGS, 'wallclock'] if getattr(args, key) is not None}
    return [defaults, preset, run_file, flags]


def default_output(command: str, preset: Optional[str]) -> str:
    name = preset or command
    suffix = '.txt' if command == 'dump' else '.csv'
    return str(Path(get_settings().output_dir) / f"{name}{suffix}")


def execute(command: str, cfg) -> bool:
    """Run one subcommand; returns True if every row succeeded."""
    from harness.reporting import row_path
    from harness.studies import (
        STATUS_FAILED,
        dump_final_solution,
        run_cfl_sweep,
        run_convergence_study,
        run_timing,
    )

    if command == 'converge':
        report = run_convergence_study(cfg)
        safe_print("")
        safe_print("📊 Results:")
        for row in report.rows:
            if row.status != 'ok':
                safe_print(f"   p={row.degree} N={row.cells}: {row.status} {row.message}".rstrip())
                continue
            dg_order = f"{row.dg_order:.2f}" if row.dg_order is not None else "-"
            pp_order = f"{row.pp_order:.2f}" if row.pp_order is not None else "-"
            safe_print(f"   p={row.degree} N={row.cells}: DG {row.dg_l2:.2e} ({dg_order})  "
                       f"filtered {row.pp_l2:.2e} ({pp_order})")
        return not any(row.status == STATUS_FAILED for row in report.rows)

    if command == 'cfl-sweep':
        for point in run_cfl_sweep(cfg):
            safe_print(f"   p={point.degree} N={point.cells} {point.integrator} cfl={point.cfl:g}: "
                       f"DG {point.dg_l2:.2e}  filtered {point.pp_l2:.2e}")
        return True

    if command == 'timing':
        for row in run_timing(cfg):
            estimated = " (estimated)" if row.rk3_estimated else ""
            safe_print(f"   p={row.degree} N={row.cells}: rhs evals RK3 {row.rk3_rhs_evals}{estimated} / "
                       f"SDG {row.sdg_rhs_evals} = {row.evals_ratio:.3g}, SDC {row.sdc_rhs_evals} = "
                       f"{row.sdc_evals_ratio:.3g}")
        return True

    rows = [(p, n) for p in cfg.degrees for n in cfg.resolutions]
    for degree, cells in rows:
        path = cfg.output if len(rows) == 1 else str(row_path(cfg.output, degree, cells))
        dump_final_solution(cfg, degree, cells, path)
        safe_print(f"   💾 p={degree} N={cells} -> {path}")
    return True


def main(argv: Optional[List[str]] = None):
    """
    Entry point of the dg-siac-time command line tool.
    Exits with status 1 if the arguments are invalid or any row failed.
    """
    configure_safe_logging()

    parser = build_parser()
    args = parser.parse_args(argv)
    loader = ExperimentLoader()

    if args.list_presets:
        safe_print("📚 Experiment presets:")
        for name in loader.get_available_presets():
            safe_print(f"   - {name}: {loader.describe(name)}")
        sys.exit(0)

    if args.command is None:
        parser.print_help(sys.stderr)
        sys.exit(1)

    from harness.run_config import RunConfig

    try:
        values = collect_run_values(args)
        if not any(source and 'output' in source for source in values[1:]):
            values.append({'output': default_output(args.command, args.preset)})
        cfg = RunConfig.from_sources(*values)
    except (DGSiacError, FileNotFoundError, ValueError) as e:
        safe_print(f"❌ Invalid configuration: {e}")
        sys.exit(1)

    safe_print("🔧 DG/SIAC time-integration study")
    safe_print("=" * 35)
    try:
        version = metadata.version("dg-siac-time")
    except metadata.PackageNotFoundError:
        version = "dev"
    safe_print(f"   📦 Version: {version}")
    safe_print(f"   🧪 Command: {args.command}")
    if args.preset:
        safe_print(f"   📚 Preset: {args.preset}")
    safe_print(f"   🐍 Python: {sys.version.split()[0]}")
    safe_print("")

    safe_print("⚙️ Active Configuration:")
    config_vars = {
        "problem": cfg.problem.value,
        "integrator": cfg.integrator.label,
        "degrees": ", ".join(str(p) for p in cfg.degrees),
        "resolutions": ", ".join(str(n) for n in cfg.resolutions),
        "cfl": cfg.cfl if cfg.cfl is not None else (cfg.cfl_by_degree or "problem default"),
        "final_time": cfg.time_for(),
        "precision": cfg.precision.value,
        "workers": cfg.workers,
        "output": cfg.output,
    }
    for key, value in config_vars.items():
        safe_print(f"   - {key}: {value}")
    safe_print("")

    try:
        ensure_output_directory(str(Path(cfg.output).parent))
    except PermissionError as e:
        safe_print(f"❌ {e}")
        sys.exit(1)

    try:
        succeeded = execute(args.command, cfg)
    except KeyboardInterrupt:
        safe_print("\n👋 Interrupted")
        sys.exit(1)
    except DGSiacError as e:
        safe_print(f"\n❌ {args.command} failed: {e}")
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        sys.exit(1)

    safe_print("")
    if not succeeded:
        safe_print("❌ Some rows failed")
        sys.exit(1)
    safe_print(f"✅ Done, results in {cfg.output}")
    sys.exit(0)


if __name__ == "__main__":
    main()
