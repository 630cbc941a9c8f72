"""
Layout Video Diffusion Toolkit - Command-Line Interface
Layout generation, guidance simulation, benchmark and inspection commands
"""

import argparse
import json
import sys
import threading
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Tuple

from config import get_config, reset_config
from logger_setup import LoggerSetup, get_logger, log_errors
from benchmark import (
    BenchmarkRules,
    MutatingGenerator,
    OracleGenerator,
    detail_table,
    generate_suite,
    run_benchmark,
    stratified_subsample,
    summary_table,
    verify,
)
from dsl import interpolate_frames, load_dsl_file, trajectories, validate_dsl
from energy.grad_check import run_gradient_suite
from guidance import GuidanceSimulator, com_weight_ablation, repeat_ablation
from llm import LlmClient, LlmDslGenerator, make_backend
from models import (
    STEP_GEOMETRIES, BenchmarkTask, DynamicSceneLayout, EnergyConfig, GuidanceSchedule, VerdictReport
)
from physics import check_all
from prompting import build_bundle, build_messages, load_examples, prompt_hash
from repositories import CompletionCacheRepository, SuiteRepository, purge_cache
from services import ExportService
from validation import (
    AllAttemptsFailed,
    EmptyDsl,
    LvdException,
    MissingFixture,
    ValidationError,
)
from visualizations import ChartGenerator, SvgOptions, write_attention_pgm, write_dsl_svg


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GENERATION_FAILED = 2
EXIT_MISSING_FIXTURE = 3


def exit_code_for(error: Exception) -> int:
    """Process exit code of an error raised by a subcommand"""
    if isinstance(error, (AllAttemptsFailed, EmptyDsl)):
        return EXIT_GENERATION_FAILED
    if isinstance(error, MissingFixture):
        return EXIT_MISSING_FIXTURE
    return EXIT_ERROR


def _print_json(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _parse_hw(text: str) -> Tuple[int, int]:
    """'32' or '32x24' (height x width)"""
    parts = text.lower().split('x')
    try:
        values = [int(p) for p in parts]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected N or HxW, got {text!r}") from e
    if len(values) == 1:
        values = values * 2
    if len(values) != 2 or min(values) < 2:
        raise argparse.ArgumentTypeError(f"latent grid must be at least 2x2, got {text!r}")
    return values[0], values[1]


def _tasks(names: Optional[List[str]]) -> Optional[List[BenchmarkTask]]:
    return [BenchmarkTask.parse(name) for name in names] if names else None


def _llm_client(args, config) -> LlmClient:
    llm_cfg = replace(
        config.llm,
        model=args.model or config.llm.model,
        endpoint=args.endpoint or config.llm.endpoint
    )
    llm_cfg.validate()
    replay_dir = args.replay_dir or config.paths.replay_dir
    backend = make_backend(args.backend, replay_dir=replay_dir)
    cache_dir = args.cache_dir or config.paths.cache_dir
    return LlmClient(backend, llm_cfg, CompletionCacheRepository(cache_dir))


# Subcommands

def cmd_gen_dsl(args, config) -> int:
    logger = get_logger('cli.gen_dsl')
    client = _llm_client(args, config)
    bundle = build_bundle(args.caption, examples=load_examples(args.examples or config.benchmark.examples))
    digest = prompt_hash(build_messages(bundle))
    logger.info(f"prompt {digest[:12]} with {len(bundle.examples)} examples")

    result = client.generate_dsl(bundle, sample=args.sample)
    paths = ExportService().export_generation(result, args.out)
    _print_json({
        'prompt_hash': digest,
        'attempts': len(result.attempts),
        'frames': result.layout.frame_count,
        'outputs': [str(p) for p in paths]
    })
    return EXIT_OK


def cmd_bench_gen(args, config) -> int:
    seed = args.seed if args.seed is not None else config.benchmark.seed
    per_task = args.per_task or config.benchmark.prompts_per_task
    suite = generate_suite(seed=seed, per_task=per_task, tasks=_tasks(args.task))
    if args.subsample:
        suite = stratified_subsample(suite, args.subsample, seed=seed)
    count = SuiteRepository().save_suite(suite, args.out)
    _print_json({'prompts': count, 'seed': seed, 'out': str(args.out)})
    return EXIT_OK


def _load_or_generate_suite(args, config):
    if args.suite:
        suite = SuiteRepository().load_suite(args.suite)
        tasks = _tasks(args.task)
        if tasks:
            suite = [p for p in suite if p.task in tasks]
        return suite
    seed = args.seed if args.seed is not None else config.benchmark.seed
    return generate_suite(seed=seed, per_task=config.benchmark.prompts_per_task, tasks=_tasks(args.task))


def _report_outputs(args, report: VerdictReport, label: str) -> None:
    repository = SuiteRepository()
    exporter = ExportService()
    if args.verdicts_out:
        repository.save_verdicts(report.verdicts, args.verdicts_out)
    if args.summary_out:
        exporter.export_summary_to_csv(report, args.summary_out, label)
    if getattr(args, 'plot_out', None):
        charts = ChartGenerator()
        charts.save(charts.create_benchmark_bars({label: report}), args.plot_out)
    print(summary_table(report, label))
    print()
    print(detail_table(report))


def cmd_bench_run(args, config) -> int:
    suite = _load_or_generate_suite(args, config)
    seed = args.seed if args.seed is not None else config.benchmark.seed
    if args.subsample:
        suite = stratified_subsample(suite, args.subsample, seed=seed)
    rules = BenchmarkRules(displacement_fraction=config.benchmark.displacement_fraction)

    if args.generator == 'oracle':
        generator = OracleGenerator()
    elif args.generator == 'mutate':
        generator = MutatingGenerator(seed=seed)
    else:
        generator = LlmDslGenerator(
            _llm_client(args, config),
            examples=list(load_examples(args.examples or config.benchmark.examples))
        )

    generations = args.generations or config.benchmark.generations_per_prompt
    if args.layouts_out:
        generator = RecordingGenerator(generator)
    report = run_benchmark(
        suite, generator,
        generations_per_prompt=generations,
        jobs=args.jobs or config.benchmark.jobs,
        rules=rules
    )
    if args.layouts_out:
        SuiteRepository().save_generations(generator.records(), args.layouts_out)
    _report_outputs(args, report, args.generator)
    return EXIT_OK


class RecordingGenerator:
    """Wraps a generator and keeps every produced layout for export"""

    def __init__(self, generator):
        self.generator = generator
        self._lock = threading.Lock()
        self._records = {}

    def __call__(self, prompt, generation: int = 0) -> DynamicSceneLayout:
        layout = self.generator(prompt, generation)
        with self._lock:
            self._records[(prompt.prompt_id, generation)] = layout
        return layout

    def records(self):
        for (prompt_id, generation), layout in sorted(self._records.items()):
            yield {'prompt_id': prompt_id, 'generation': generation, 'layout': layout.to_dict()}


def cmd_bench_verify(args, config) -> int:
    repository = SuiteRepository()
    prompts = {p.prompt_id: p for p in repository.load_suite(args.suite)}
    rules = BenchmarkRules(displacement_fraction=config.benchmark.displacement_fraction)
    verdicts = []
    for record in repository.load_generations(args.layouts):
        prompt = prompts.get(record.get('prompt_id'))
        if prompt is None:
            raise ValidationError(f"layout for unknown prompt {record.get('prompt_id')!r}")
        layout = DynamicSceneLayout.from_dict(record['layout'])
        verdicts.append(verify(prompt, layout, rules, generation=int(record.get('generation', 0))))
    _report_outputs(args, VerdictReport.from_verdicts(verdicts), args.label)
    return EXIT_OK


def cmd_bench_report(args, config) -> int:
    report = VerdictReport.from_verdicts(SuiteRepository().load_verdicts(args.verdicts))
    if args.json:
        _print_json(report.to_dict())
        return EXIT_OK
    args.verdicts_out = None
    _report_outputs(args, report, args.label)
    return EXIT_OK


def _guide_ablation(args, dsl, schedule, cfg, hw) -> int:
    H, W = hw
    seeds = tuple(range(args.ablation_seeds)) if args.ablation_seeds else None
    options = {'H': H, 'W': W, 'cfg': cfg, 'schedule': schedule}
    if seeds is not None:
        options['seeds'] = seeds

    if args.ablate == 'repeats':
        if args.values:
            options['repeats'] = tuple(int(v) for v in args.values)
        results = repeat_ablation(dsl, **options)
        xlabel, metric = 'Repeats per step', 'mean_alignment'
    else:
        if args.values:
            options['weights'] = tuple(args.values)
        results = com_weight_ablation(dsl, **options)
        xlabel, metric = 'CoM weight', 'mean_velocity_error'

    if args.plot_out:
        charts = ChartGenerator()
        charts.save(charts.create_ablation_curve(results, xlabel, metric.replace('_', ' ')), args.plot_out)

    _print_json({
        'ablation': args.ablate,
        'metric': metric,
        'geometry': schedule.geometry,
        'latent': [H, W],
        'results': {str(key): value for key, value in results.items()}
    })
    return EXIT_OK


def cmd_guide_sim(args, config) -> int:
    guidance = config.guidance
    dsl = load_dsl_file(args.dsl)
    interpolate_to = args.interpolate_to if args.interpolate_to is not None else guidance.interpolate_to
    if interpolate_to:
        dsl = interpolate_frames(dsl, interpolate_to)

    H, W = args.hw or (guidance.latent_size, guidance.latent_size)
    cfg = EnergyConfig(
        w_fg=args.w_fg if args.w_fg is not None else guidance.w_fg,
        w_bg=args.w_bg if args.w_bg is not None else guidance.w_bg,
        topk_fraction=args.topk if args.topk is not None else guidance.topk_fraction,
        com_weight=args.com_weight if args.com_weight is not None else guidance.com_weight,
        guidance_scale=args.scale if args.scale is not None else guidance.guidance_scale
    )
    total_steps = args.steps or guidance.total_steps
    schedule = GuidanceSchedule(
        total_steps=total_steps,
        guided_steps=args.guided_steps if args.guided_steps is not None else min(guidance.guided_steps, total_steps),
        repeats_per_step=args.repeats or guidance.repeats_per_step,
        scale=cfg.guidance_scale,
        geometry=args.geometry or guidance.step_geometry
    )
    seed = args.seed if args.seed is not None else guidance.seed

    if args.ablate:
        return _guide_ablation(args, dsl, schedule, cfg, (H, W))

    simulator = GuidanceSimulator(dsl, schedule, cfg, H, W, seed, attention_gain=args.gain)
    baseline = simulator.metrics()
    run = simulator.run()

    exporter = ExportService()
    settings = {
        'energy': cfg.to_dict(),
        'schedule': schedule.to_dict(),
        'latent': [H, W],
        'seed': seed,
        'frames': dsl.frame_count,
        'unguided': baseline.to_dict(),
        'final_energy': run.energies[-1] if run.energies else None
    }
    metrics_out = args.metrics_out or config.paths.output_dir / 'metrics.json'
    exporter.export_metrics(run.metrics, metrics_out, settings)
    if args.trace_out:
        exporter.export_trace_to_csv(run.trace, args.trace_out)
    if args.pgm_dir:
        attention = run.state.attention()
        for f, frame_index in enumerate(run.state.frame_indices):
            for o, object_id in enumerate(run.state.object_ids):
                if run.state.present[f, o]:
                    write_attention_pgm(
                        attention[f, o],
                        Path(args.pgm_dir) / f"frame_{frame_index}_id_{object_id}.pgm",
                        scale=args.pgm_scale
                    )
    if args.plot_out:
        charts = ChartGenerator()
        charts.save(charts.create_energy_trace(run.trace), args.plot_out)

    _print_json({'metrics': run.metrics.to_dict(), 'metrics_out': str(metrics_out)})
    return EXIT_OK


def cmd_validate(args, config) -> int:
    dsl = load_dsl_file(args.dsl)
    violations = validate_dsl(dsl)
    _print_json([v.to_dict() for v in violations])
    blocking = [v for v in violations if v.kind != 'Overlap']
    return EXIT_ERROR if blocking else EXIT_OK


def cmd_physics(args, config) -> int:
    dsl = load_dsl_file(args.dsl)
    results = []
    for trajectory in trajectories(dsl):
        if args.id is not None and trajectory.id != args.id:
            continue
        verdicts = check_all(
            trajectory, dsl.canvas,
            elastic=not args.inelastic,
            receding=not args.approaching,
            ground_y=args.ground_y
        )
        results.append({
            'id': trajectory.id,
            'name': trajectory.name,
            'verdicts': [v.to_dict() for v in verdicts]
        })
    _print_json(results)
    return EXIT_OK


def cmd_render(args, config) -> int:
    dsl = load_dsl_file(args.dsl)
    options = SvgOptions(
        show_ids=not args.no_ids,
        show_names=not args.no_names,
        palette_seed=args.palette_seed
    )
    paths = write_dsl_svg(dsl, args.out_dir, options)
    _print_json([str(p) for p in paths])
    return EXIT_OK


def cmd_grad_check(args, config) -> int:
    report = run_gradient_suite(
        seeds=tuple(range(args.seeds)),
        instances=args.instances,
        size=args.size,
        tolerance=args.tolerance
    )
    _print_json(report.to_dict())
    return EXIT_OK if report.passed else EXIT_ERROR


def cmd_cache_purge(args, config) -> int:
    removed = purge_cache(args.cache_dir or config.paths.cache_dir)
    _print_json({'removed': removed})
    return EXIT_OK


# Parser

def _add_llm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--backend', choices=['live', 'replay'], default='replay')
    parser.add_argument('--model', help='Model name (config llm.model by default)')
    parser.add_argument('--endpoint', help='Chat-completions URL')
    parser.add_argument('--replay-dir', type=Path, help='Recorded completions (cache layout)')
    parser.add_argument('--cache-dir', type=Path, help='Completion cache for live runs')
    parser.add_argument('--examples', type=int, choices=[1, 3, 5], help='In-context examples')


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--verdicts-out', type=Path, help='Verdict JSONL')
    parser.add_argument('--summary-out', type=Path, help='Summary CSV')
    parser.add_argument('--plot-out', type=Path, help='Per-task bar chart (PNG)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='lvd',
        description='Layout generation, layout-guided attention simulation and layout benchmarks'
    )
    parser.add_argument('--config', type=Path, help='JSON config file')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'])
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen-dsl', help='Generate a layout for a caption')
    gen.add_argument('--caption', required=True)
    gen.add_argument('--out', type=Path, required=True, help='Layout JSON path')
    gen.add_argument('--sample', type=int, default=0, help='Generation index for the same prompt')
    _add_llm_flags(gen)
    gen.set_defaults(handler=cmd_gen_dsl)

    bench = commands.add_parser('bench', help='Benchmark suite commands')
    bench_commands = bench.add_subparsers(dest='bench_command', required=True)

    bench_gen = bench_commands.add_parser('gen', help='Write the prompt suite as JSONL')
    bench_gen.add_argument('--seed', type=int)
    bench_gen.add_argument('--task', nargs='+')
    bench_gen.add_argument('--per-task', type=int)
    bench_gen.add_argument('--subsample', type=int, help='Stratified subsample size')
    bench_gen.add_argument('--out', type=Path, required=True)
    bench_gen.set_defaults(handler=cmd_bench_gen)

    bench_run = bench_commands.add_parser('run', help='Generate and verify layouts for a suite')
    bench_run.add_argument('--suite', type=Path, help='Suite JSONL (generated from --seed if absent)')
    bench_run.add_argument('--seed', type=int)
    bench_run.add_argument('--task', nargs='+')
    bench_run.add_argument('--subsample', type=int)
    bench_run.add_argument('--generator', choices=['oracle', 'mutate', 'llm'], default='oracle')
    bench_run.add_argument('--generations', type=int)
    bench_run.add_argument('--jobs', type=int)
    bench_run.add_argument('--layouts-out', type=Path, help='Generated layouts JSONL')
    _add_llm_flags(bench_run)
    _add_report_flags(bench_run)
    bench_run.set_defaults(handler=cmd_bench_run)

    bench_verify = bench_commands.add_parser('verify', help='Verify recorded layouts')
    bench_verify.add_argument('--suite', type=Path, required=True)
    bench_verify.add_argument('--layouts', type=Path, required=True)
    bench_verify.add_argument('--label', default='DSL')
    _add_report_flags(bench_verify)
    bench_verify.set_defaults(handler=cmd_bench_verify)

    bench_report = bench_commands.add_parser('report', help='Summarize a verdict file')
    bench_report.add_argument('--verdicts', type=Path, required=True)
    bench_report.add_argument('--label', default='DSL')
    bench_report.add_argument('--json', action='store_true')
    bench_report.add_argument('--summary-out', type=Path)
    bench_report.add_argument('--plot-out', type=Path)
    bench_report.set_defaults(handler=cmd_bench_report)

    sim = commands.add_parser('guide-sim', help='Run layout guidance on the attention substrate')
    sim.add_argument('--dsl', type=Path, required=True)
    sim.add_argument('--hw', type=_parse_hw, help='Latent grid, N or HxW')
    sim.add_argument('--steps', type=int)
    sim.add_argument('--guided-steps', type=int)
    sim.add_argument('--repeats', type=int)
    sim.add_argument('--scale', type=float)
    sim.add_argument('--com-weight', type=float)
    sim.add_argument('--w-fg', type=float)
    sim.add_argument('--w-bg', type=float)
    sim.add_argument('--topk', type=float, help='Top-k fraction')
    sim.add_argument('--gain', type=float, help='Attention gain (H*W by default)')
    sim.add_argument('--seed', type=int)
    sim.add_argument('--interpolate-to', type=int)
    sim.add_argument('--metrics-out', type=Path)
    sim.add_argument('--trace-out', type=Path)
    sim.add_argument('--pgm-dir', type=Path)
    sim.add_argument('--pgm-scale', type=int, default=8)
    sim.add_argument('--plot-out', type=Path)
    sim.add_argument('--geometry', choices=STEP_GEOMETRIES, help='Logit step geometry')
    sim.add_argument('--ablate', choices=['repeats', 'com'], help='Sweep repeats per step or the CoM weight')
    sim.add_argument('--values', type=float, nargs='+', help='Repeat counts or CoM weights to sweep')
    sim.add_argument('--ablation-seeds', type=int, help='Seeds averaged per ablation setting')
    sim.set_defaults(handler=cmd_guide_sim)

    validate = commands.add_parser('validate', help='Report layout violations')
    validate.add_argument('dsl', type=Path)
    validate.set_defaults(handler=cmd_validate)

    physics = commands.add_parser('physics', help='Check gravity, bounce and perspective')
    physics.add_argument('dsl', type=Path)
    physics.add_argument('--id', type=int)
    physics.add_argument('--inelastic', action='store_true')
    physics.add_argument('--approaching', action='store_true')
    physics.add_argument('--ground-y', type=float)
    physics.set_defaults(handler=cmd_physics)

    render = commands.add_parser('render', help='Draw a layout as SVG')
    render.add_argument('dsl', type=Path)
    render.add_argument('--out-dir', type=Path, required=True)
    render.add_argument('--no-ids', action='store_true')
    render.add_argument('--no-names', action='store_true')
    render.add_argument('--palette-seed', type=int, default=0)
    render.set_defaults(handler=cmd_render)

    grad = commands.add_parser('grad-check', help='Finite-difference check of the energy gradients')
    grad.add_argument('--seeds', type=int, default=5)
    grad.add_argument('--instances', type=int, default=20)
    grad.add_argument('--size', type=int, default=16)
    grad.add_argument('--tolerance', type=float, default=1e-4)
    grad.set_defaults(handler=cmd_grad_check)

    purge = commands.add_parser('cache-purge', help='Delete cached completions')
    purge.add_argument('--cache-dir', type=Path)
    purge.set_defaults(handler=cmd_cache_purge)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    try:
        reset_config()
        config = get_config(config_file=args.config)
        LoggerSetup.setup_logging(config, level=args.log_level)
        with log_errors(f"command {args.command}", get_logger('cli')):
            return args.handler(args, config)
    except LvdException as e:
        sys.stderr.write(json.dumps(e.to_dict()) + '\n')
        return exit_code_for(e)
    except Exception as e:
        sys.stderr.write(json.dumps({'error': type(e).__name__, 'message': str(e)}) + '\n')
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
