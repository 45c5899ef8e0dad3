"""Command-line front end.

Exit codes are a stable contract: 0 all checks passed, 1 at least one
violation or disagreement, 2 usage or input errors. JSON output is a
deterministic function of the scene bytes and the run configuration; the
seed is echoed in every report so any run can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .algebroid import (
    SUITES,
    BracketVariant,
    anchor_pi,
    bracket,
    derive_anchor,
    run_suite,
)
from .calculus import NambuStructure, validate_nambu
from .dsl import Scene, parse_scene
from .errors import ExtractionFailure, NlabError

EXIT_PASS = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2

DEFAULT_TRIALS = 100
DEFAULT_SEED = 42
DEFAULT_MAX_DEGREE = 2
DEFAULT_MAX_ABS_COEFF = 3

_SIGN_BY_FLAG = {"dim": "dimension", "order": "order"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    scene_path: str
    structure: str | None
    variant: str
    sign_exponent: str
    suites: tuple[str, ...]
    trials: int
    seed: int
    max_degree: int
    max_abs_coeff: int
    output_format: str
    alpha: str | None = None
    beta: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlab",
        description="Exact symbolic checks for Leibniz brackets attached to "
        "Nambu-type multivector structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("scene", help="path to a scene file")
        p.add_argument("--structure", help="structure name (default: first declared)")
        p.add_argument(
            "--format", choices=("text", "json"), default="text", dest="output_format"
        )

    def add_variant(p: argparse.ArgumentParser):
        p.add_argument("--variant", choices=("ibanez", "hagiwara"), default="ibanez")
        p.add_argument(
            "--sign",
            choices=("dim", "order"),
            default="dim",
            help="sign exponent for the ibanez variant",
        )

    def add_sampling(p: argparse.ArgumentParser):
        p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help=f"PRNG seed (default: NLAB_SEED env var, else {DEFAULT_SEED})",
        )
        p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
        p.add_argument("--max-abs-coeff", type=int, default=DEFAULT_MAX_ABS_COEFF)

    p_validate = sub.add_parser(
        "validate", help="sampled fundamental-identity check of a structure"
    )
    add_common(p_validate)
    add_sampling(p_validate)

    p_bracket = sub.add_parser("bracket", help="compute one bracket of two sections")
    add_common(p_bracket)
    add_variant(p_bracket)
    p_bracket.add_argument("--alpha", required=True, help="section name")
    p_bracket.add_argument("--beta", required=True, help="section name")

    p_verify = sub.add_parser("verify", help="run verification suites")
    add_common(p_verify)
    add_variant(p_verify)
    add_sampling(p_verify)
    p_verify.add_argument(
        "--suite",
        default=",".join(SUITES),
        help=f"comma-separated suites (default: all of {','.join(SUITES)})",
    )

    p_anchor = sub.add_parser(
        "anchor", help="compare the bracket-derived anchor with tensor insertion"
    )
    add_common(p_anchor)
    add_variant(p_anchor)
    p_anchor.add_argument("--alpha", required=True, help="section name")

    return parser


class InputError(Exception):
    """Bad user input that is not a parse error (unknown names, bad env)."""


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    raw = os.environ.get("NLAB_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"NLAB_SEED is not an integer: {raw!r}") from None


def _usage_error(message: str) -> int:
    print(f"nlab: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _load_scene(path: str) -> Scene:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scene(handle.read())


def _pick_structure(scene: Scene, name: str | None) -> tuple[str, NambuStructure]:
    if not scene.structures:
        raise InputError("scene declares no structures")
    if name is None:
        first = next(iter(scene.structures))
        return first, scene.structures[first]
    if name not in scene.structures:
        raise InputError(f"unknown structure {name!r}")
    return name, scene.structures[name]


def _pick_section(scene: Scene, name: str):
    if name not in scene.sections:
        raise InputError(f"unknown section {name!r}")
    return scene.sections[name]


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def cmd_validate(config: RunConfig) -> int:
    scene = _load_scene(config.scene_path)
    name, structure = _pick_structure(scene, config.structure)
    report = validate_nambu(
        structure,
        trials=config.trials,
        seed=config.seed,
        max_degree=config.max_degree,
        max_abs_coeff=config.max_abs_coeff,
        label=f"{name}: {structure.describe()}",
    )
    if config.output_format == "json":
        _emit_json(report.to_dict())
    else:
        print(report.summary())
        for violation in report.violations:
            details = " ".join(f"{k}={v}" for k, v in violation.inputs.items())
            print(f"  trial={violation.trial} {details} defect={violation.defect}")
    return EXIT_PASS if report.passed else EXIT_VIOLATIONS


def cmd_bracket(config: RunConfig) -> int:
    scene = _load_scene(config.scene_path)
    name, structure = _pick_structure(scene, config.structure)
    variant = BracketVariant(config.variant, config.sign_exponent)
    alpha = _pick_section(scene, config.alpha)
    beta = _pick_section(scene, config.beta)
    result = bracket(structure, variant, alpha, beta)
    if config.output_format == "json":
        _emit_json(
            {
                "command": "bracket",
                "structure": name,
                "variant": variant.describe(),
                "alpha": alpha.render(),
                "beta": beta.render(),
                "result": result.render(),
            }
        )
    else:
        print(result.render())
    return EXIT_PASS


def cmd_verify(config: RunConfig) -> int:
    scene = _load_scene(config.scene_path)
    name, structure = _pick_structure(scene, config.structure)
    variant = BracketVariant(config.variant, config.sign_exponent)
    label = f"{name}: {structure.describe()}"
    reports = [
        run_suite(
            structure,
            variant,
            suite,
            trials=config.trials,
            seed=config.seed,
            max_degree=config.max_degree,
            max_abs_coeff=config.max_abs_coeff,
            label=label,
        )
        for suite in config.suites
    ]
    if config.output_format == "json":
        _emit_json([report.to_dict() for report in reports])
    else:
        for report in reports:
            print(report.summary())
            for violation in report.violations:
                details = " ".join(f"{k}={v}" for k, v in violation.inputs.items())
                print(f"  trial={violation.trial} {details} defect={violation.defect}")
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_VIOLATIONS


def cmd_anchor(config: RunConfig) -> int:
    scene = _load_scene(config.scene_path)
    name, structure = _pick_structure(scene, config.structure)
    variant = BracketVariant(config.variant, config.sign_exponent)
    alpha = _pick_section(scene, config.alpha)
    insertion = anchor_pi(structure, alpha)
    failure: str | None = None
    derived_text = None
    try:
        derived = derive_anchor(structure, variant, alpha).as_vector_field()
        derived_text = derived.render()
        agree = derived == insertion
    except ExtractionFailure as exc:
        failure = str(exc)
        agree = False
    if config.output_format == "json":
        _emit_json(
            {
                "command": "anchor",
                "structure": name,
                "variant": variant.describe(),
                "alpha": alpha.render(),
                "derived": derived_text if failure is None else None,
                "insertion": insertion.render(),
                "extraction_failure": failure,
                "agree": agree,
            }
        )
    else:
        print(f"derived   {derived_text if failure is None else f'<{failure}>'}")
        print(f"insertion {insertion.render()}")
        print(f"agree     {str(agree).lower()}")
    return EXIT_PASS if agree else EXIT_VIOLATIONS


_COMMANDS = {
    "validate": cmd_validate,
    "bracket": cmd_bracket,
    "verify": cmd_verify,
    "anchor": cmd_anchor,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    suites: tuple[str, ...] = ()
    if args.command == "verify":
        suites = tuple(s.strip() for s in args.suite.split(",") if s.strip())
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            return _usage_error(
                f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}"
            )
        if not suites:
            return _usage_error("no suites selected")

    trials = getattr(args, "trials", DEFAULT_TRIALS)
    if trials < 1:
        return _usage_error(f"trials must be >= 1, got {trials}")

    try:
        config = RunConfig(
            command=args.command,
            scene_path=args.scene,
            structure=args.structure,
            variant=getattr(args, "variant", "ibanez"),
            sign_exponent=_SIGN_BY_FLAG[getattr(args, "sign", "dim")],
            suites=suites,
            trials=trials,
            seed=_resolve_seed(getattr(args, "seed", None)),
            max_degree=getattr(args, "max_degree", DEFAULT_MAX_DEGREE),
            max_abs_coeff=getattr(args, "max_abs_coeff", DEFAULT_MAX_ABS_COEFF),
            output_format=args.output_format,
            alpha=getattr(args, "alpha", None),
            beta=getattr(args, "beta", None),
        )
        return _COMMANDS[config.command](config)
    except OSError as exc:
        return _usage_error(f"cannot read scene: {exc}")
    except InputError as exc:
        return _usage_error(str(exc))
    except NlabError as exc:
        return _usage_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
