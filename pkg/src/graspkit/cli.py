"""Command-line surface tying the modules into one workflow.

Subcommands cover the full path from raw annotations to a deployed-style
decision loop: aggregate labels, augment images, generate toy features,
train and evaluate the dense head, pick an efficient backbone, count FLOPs,
simulate fusion, and plot results.

Every randomized subcommand requires --seed and records it in its output
files as a comment line. Exit codes: 0 success, 1 toolkit error (named on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import augment as aug
from . import core, flops, fusion, head, pareto, plots
from .errors import ConfigError, GraspKitError
from .features import read_feature_file, write_feature_file


def parse_config(path: str | Path) -> dict[str, str]:
    """Parse a flat `key = value` file; `#` starts a comment line."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        values[key] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, config: dict[str, str]) -> None:
    """Use config values as argument defaults; explicit flags still win."""
    known = {}
    for action in parser._actions:
        if action.dest in config:
            raw = config[action.dest]
            known[action.dest] = action.type(raw) if action.type else raw
    unknown = set(config) - {a.dest for a in parser._actions}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    parser.set_defaults(**known)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graspkit",
        description="grasp-distribution training and selection toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="annotation CSV -> soft-label CSV")
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("augment", help="segmented objects -> augmented images")
    p.add_argument("--images", required=True, help="dir with <id>.ppm|pgm + <id>.mask.pgm")
    p.add_argument("--labels", required=True, help="object_id,p0..p4 CSV")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--copies", type=int, default=10)
    p.add_argument("--sigma-min", type=float, default=0.5)
    p.add_argument("--sigma-max", type=float, default=2.0)
    p.add_argument("--var-min", type=float, default=25.0)
    p.add_argument("--var-max", type=float, default=400.0)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("toy-data", help="generate a synthetic feature dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--feature-dim", type=int, required=True)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train the dense head on a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--epochs-per-phase", type=int, default=50)
    p.add_argument("--lr1", type=float, default=1e-3)
    p.add_argument("--lr2", type=float, default=1e-4)
    p.add_argument("--split", type=float, default=0.8)

    p = sub.add_parser("eval", help="mean angular similarity of a checkpoint")
    p.add_argument("--features", required=True)
    p.add_argument("--checkpoint", required=True)

    p = sub.add_parser("pareto", help="frontier of a model-card CSV")
    p.add_argument("--cards", default=None, help="card CSV (default: bundled set)")
    p.add_argument("--budget", type=int, default=None, help="max FLOPs")
    p.add_argument("--out", default=None, help="write frontier CSV here")

    p = sub.add_parser("flops", help="count FLOPs of a network spec")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network", help="network spec JSON")
    src.add_argument(
        "--head-input",
        nargs=3,
        type=int,
        metavar=("H", "W", "C"),
        help="count the pooled dense head for an HxWxC feature map",
    )

    p = sub.add_parser("fuse-sim", help="fuse two streams through the window")
    p.add_argument("--vision", required=True)
    p.add_argument("--emg", required=True)
    p.add_argument("--w-vision", type=float, default=0.5)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--window-s", type=float, default=2.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("plot", help="render history or frontier SVG")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--history", help="history CSV from train")
    src.add_argument("--cards", help="model-card CSV")
    p.add_argument("--out", required=True)

    return parser


def _cmd_aggregate(args: argparse.Namespace) -> int:
    sets = core.read_annotations(args.annotations)
    rows = [(s.object_id, core.aggregate_annotations(s)) for s in sets]
    core.write_labels(args.out, rows)
    print(f"aggregated {len(rows)} objects -> {args.out}")
    return 0


def _load_objects(
    image_dir: Path, labels: list[tuple[str, core.GraspDistribution]]
) -> list[tuple[aug.SegmentedObject, core.GraspDistribution]]:
    objects = []
    for object_id, dist in labels:
        image_path = None
        for ext in (".ppm", ".pgm"):
            candidate = image_dir / f"{object_id}{ext}"
            if candidate.exists():
                image_path = candidate
                break
        if image_path is None:
            raise GraspKitError(f"no image for object {object_id} in {image_dir}")
        mask_path = image_dir / f"{object_id}.mask.pgm"
        if not mask_path.exists():
            raise GraspKitError(f"no mask for object {object_id} in {image_dir}")
        obj = aug.SegmentedObject(
            image=aug.read_image(image_path), mask=aug.read_image(mask_path)
        )
        objects.append((obj, dist))
    return objects


def _cmd_augment(args: argparse.Namespace) -> int:
    labels = core.read_labels(args.labels)
    objects = _load_objects(Path(args.images), labels)
    cfg = aug.AugmentConfig(
        output_w=args.width,
        output_h=args.height,
        blur_sigma_range=(args.sigma_min, args.sigma_max),
        noise_variance_range=(args.var_min, args.var_max),
        copies_per_object=args.copies,
        seed=args.seed,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    images = aug.augment_dataset(objects, cfg)
    manifest_rows = []
    for i, (img, dist) in enumerate(images):
        obj_idx, copy_idx = divmod(i, cfg.copies_per_object)
        object_id = labels[obj_idx][0]
        ext = ".pgm" if img.channels == 1 else ".ppm"
        name = f"{object_id}_{copy_idx:03d}{ext}"
        aug.write_image(out_dir / name, img)
        manifest_rows.append((name, dist))
    aug.write_augment_manifest(
        out_dir / "manifest.csv", manifest_rows, comments=[f"seed = {args.seed}"]
    )
    print(f"wrote {len(images)} images -> {out_dir}")
    return 0


def _cmd_toy_data(args: argparse.Namespace) -> int:
    data = aug.synthetic_toy_dataset(
        n_samples=args.n,
        feature_dim=args.feature_dim,
        temperature=args.temperature,
        seed=args.seed,
    )
    write_feature_file(
        args.out,
        data,
        comments=[
            f"seed = {args.seed}",
            f"temperature = {args.temperature}",
        ],
    )
    print(f"wrote {len(data)} rows of dim {data.feature_dim} -> {args.out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    data = read_feature_file(args.features)
    cfg = head.TrainConfig(
        batch_size=args.batch_size,
        epochs_per_phase=args.epochs_per_phase,
        lr_phase1=args.lr1,
        lr_phase2=args.lr2,
        seed=args.seed,
        split_fraction=args.split,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model, history = head.train(data, cfg)
    head.write_checkpoint(out_dir / "checkpoint.ghed", model)
    head.write_history(
        out_dir / "history.csv", history, comments=[f"seed = {args.seed}"]
    )
    # the validation split is re-emitted so `eval` can reproduce the last
    # history row from files alone
    _train_idx, val_idx = head.split_indices(len(data), cfg)
    val_set = data.subset(val_idx)
    write_feature_file(
        out_dir / "val.gfea", val_set, comments=[f"seed = {args.seed}"]
    )
    final = history.val_angular_similarity[-1]
    print(f"final val angular similarity: {final!r}")
    print(f"wrote checkpoint.ghed, history.csv, val.gfea -> {out_dir}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    data = read_feature_file(args.features)
    model = head.read_checkpoint(args.checkpoint)
    print(repr(head.evaluate(model, data)))
    return 0


def _cmd_pareto(args: argparse.Namespace) -> int:
    cards = pareto.read_cards(args.cards) if args.cards else pareto.bundled_cards()
    frontier = pareto.pareto_frontier(cards)
    if args.out:
        pareto.write_cards(args.out, frontier)
    else:
        print(",".join(pareto.CARD_HEADER))
        for c in frontier:
            print(f"{c.name},{c.top5_accuracy!r},{c.flops}")
    if args.budget is not None:
        chosen, fits = pareto.select_for_budget(cards, args.budget)
        print(f"selected: {chosen.name} ({chosen.flops} FLOPs)")
        if not fits:
            print(
                f"warning: no frontier model fits {args.budget} FLOPs; "
                f"falling back to the cheapest",
                file=sys.stderr,
            )
    return 0


def _cmd_flops(args: argparse.Namespace) -> int:
    if args.network:
        network = flops.read_network_spec(args.network)
    else:
        h, w, c = args.head_input
        network = flops.head_spec(h, w, c)
    total = flops.network_flops(network)
    for i, layer in enumerate(network.layers):
        print(f"{i}\t{type(layer).__name__}\t{flops.layer_flops(layer)}")
    print(f"total\t{network.name}\t{total}")
    return 0


def _cmd_fuse_sim(args: argparse.Namespace) -> int:
    vision = fusion.read_stream(args.vision)
    emg = fusion.read_stream(args.emg)
    if len(vision) != len(emg):
        raise GraspKitError(
            f"stream lengths differ: {len(vision)} vision vs {len(emg)} emg"
        )
    weights = fusion.FusionWeights(w_vision=args.w_vision)
    window = fusion.DecisionWindow.from_rate(fps=args.fps, window_s=args.window_s)
    rows = []
    for (t, v), (_t, e) in zip(vision, emg):
        fused = fusion.fuse(v, e, weights)
        rows.append((t, fusion.push_and_decide(window, fused)))
    fusion.write_decisions(
        args.out,
        rows,
        comments=[
            f"w_vision = {args.w_vision}",
            f"capacity = {window.capacity}",
        ],
    )
    print(f"wrote {len(rows)} decisions -> {args.out}")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    if args.history:
        plots.plot_history(head.read_history(args.history), args.out)
    else:
        plots.plot_frontier(pareto.read_cards(args.cards), args.out)
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "aggregate": _cmd_aggregate,
    "augment": _cmd_augment,
    "toy-data": _cmd_toy_data,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "pareto": _cmd_pareto,
    "flops": _cmd_flops,
    "fuse-sim": _cmd_fuse_sim,
    "plot": _cmd_plot,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    # --config FILE supplies defaults for the chosen subcommand
    config: dict[str, str] | None = None
    if "--config" in argv:
        at = argv.index("--config")
        if at + 1 >= len(argv):
            parser.error("--config needs a file path")
        try:
            config = parse_config(argv[at + 1])
        except (OSError, ConfigError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 1
        del argv[at : at + 2]
    if config:
        sub_actions = [
            a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
        ]
        command = next((a for a in argv if not a.startswith("-")), None)
        if command in sub_actions[0].choices:
            try:
                _apply_config(sub_actions[0].choices[command], config)
            except ConfigError as exc:
                print(f"error: ConfigError: {exc}", file=sys.stderr)
                return 1
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GraspKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
