"""Command line front end for the relation, factorization and verifier suites.

All subcommands read one JSON config (ring and family descriptors plus
optional scale, level budget, sample count and seed) and emit a single
JSON report with sorted keys.  Reports are byte-identical across runs
with the same config, seed and package version; timings are printed to
stderr and never enter the report.  Exit status: 0 for a clean or
warning-only run, 1 when violations were found, 2 for usage or config
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

from . import __version__
from .crossed import crossed_module_verify
from .gauss import NotInvertible, enumerate_gl, gauss_decompose, sample_gl
from .peirce import BadFamily, family_from_json
from .rings import MatrixAlgebra, SforgeError, ring_from_json
from .tower import (
    HomotopeTower,
    actor_relation_suite,
    scaled_operator_suite,
    split_naturality_suite,
    tower_relation_suite,
)
from .words import (
    Context,
    check_relation_instance,
    commutator,
    exhaustive_relation_grid,
    gen,
    random_relation_indices,
    st_eval,
)

_CONFIG_FIELDS = {
    "element",
    "family",
    "k_max",
    "ring",
    "samples",
    "scale",
    "seed",
    "system",
}

_FAULTS = {
    "relations": ("st3-zero",),
    "gauss": (),
    "crossed-module": ("drop-diagonal",),
    "tower": ("drop-scale",),
}


class ConfigError(SforgeError):
    """The config file is missing, malformed, or inconsistent."""


class InstanceConfig:
    """One parsed run configuration, CLI overrides already applied."""

    def __init__(self, ring, family, scale, k_max, samples, seed, element, system):
        self.ring = ring
        self.family = family
        self.scale = scale
        self.k_max = k_max
        self.samples = samples
        self.seed = seed
        self.element = element
        self.system = system

    @classmethod
    def load(cls, path, seed=None, samples=None):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError("cannot read config: %s" % exc)
        except json.JSONDecodeError as exc:
            raise ConfigError("config is not valid JSON: %s" % exc)
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(raw) - _CONFIG_FIELDS)
        if unknown:
            raise ConfigError("unknown config fields: %s" % ", ".join(unknown))
        if "ring" not in raw:
            raise ConfigError("config needs a 'ring' descriptor")
        try:
            ring = ring_from_json(raw["ring"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError("bad ring descriptor: %s" % exc)

        family = None
        if isinstance(ring, MatrixAlgebra):
            try:
                family = family_from_json(ring, raw.get("family", "units"))
            except (BadFamily, ValueError, TypeError, IndexError) as exc:
                raise ConfigError("bad family descriptor: %s" % exc)
        elif "family" in raw:
            raise ConfigError("idempotent families need a matrix ring")

        scale = None
        if "scale" in raw:
            scalar = ring.scalar_ring if isinstance(ring, MatrixAlgebra) else ring
            try:
                scale = scalar.element_from_json(raw["scale"])
            except (ValueError, TypeError) as exc:
                raise ConfigError("bad scale element: %s" % exc)

        k_max = raw.get("k_max", 6)
        if not isinstance(k_max, int) or k_max < 0:
            raise ConfigError("k_max must be a nonnegative integer")
        if samples is None:
            samples = raw.get("samples", 200)
        if not isinstance(samples, int) or samples < 1:
            raise ConfigError("samples must be a positive integer")
        if seed is None:
            seed = raw.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        system = raw.get("system", "plain")
        if system not in ("plain", "homotope"):
            raise ConfigError("system must be 'plain' or 'homotope'")
        element = raw.get("element")
        return cls(ring, family, scale, k_max, samples, seed, element, system)

    def echo(self):
        out = {
            "k_max": self.k_max,
            "ring": self.ring.to_json(),
            "samples": self.samples,
            "seed": self.seed,
            "system": self.system,
        }
        if self.family is not None:
            out["family"] = self.family.to_json()
        if self.scale is not None:
            scalar = (
                self.ring.scalar_ring
                if isinstance(self.ring, MatrixAlgebra)
                else self.ring
            )
            out["scale"] = scalar.element_to_json(self.scale)
        if self.element is not None:
            out["element"] = self.element
        return out

    def config_hash(self, command):
        blob = json.dumps(
            {"command": command, "config": self.echo(), "version": __version__},
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _require_family(cfg, command):
    if cfg.family is None:
        raise ConfigError("%s needs a matrix ring with an idempotent family" % command)
    return cfg.family


def cmd_relations(cfg, args):
    fam = _require_family(cfg, "relations")
    rng = random.Random(cfg.seed)
    alg = fam.algebra
    n = len(list(fam.labels()))
    contexts = [("plain", Context(fam))]
    if cfg.system == "homotope" or cfg.scale is not None:
        if cfg.scale is None:
            raise ConfigError("homotope relation runs need a scale element")
        tower = HomotopeTower(alg, cfg.scale, cfg.k_max, fam)
        for k in range(cfg.k_max + 1):
            contexts.append(("level-%d" % k, tower.context(k)))

    suites = {}
    violations = 0
    for tag, ctx in contexts:
        per = {}
        for kind in ("St1", "St2", "St3"):
            if kind == "St3" and n < 3:
                per[kind] = {"checked": 0, "violations": 0}
                continue
            checked = bad = 0
            for _ in range(cfg.samples):
                i, j, k2, l = random_relation_indices(fam, rng, kind)
                a = fam.sample_component(i, j, rng)
                if kind == "St1":
                    b = fam.sample_component(i, j, rng)
                elif kind == "St2":
                    b = fam.sample_component(k2, l, rng)
                else:
                    b = fam.sample_component(j, k2, rng)
                if args.inject_fault == "st3-zero" and kind == "St3":
                    lhs = commutator(gen(ctx, i, j, a), gen(ctx, j, k2, b))
                    want = alg.one if ctx.scale is None else alg.zero
                    ok = st_eval(lhs) == want
                else:
                    ok = check_relation_instance(ctx, kind, i, j, k2, l, a, b).ok
                checked += 1
                bad += not ok
            per[kind] = {"checked": checked, "violations": bad}
            violations += bad
            if args.exhaustive:
                grid = exhaustive_relation_grid(ctx, kind)
                per[kind + "_exhaustive"] = grid
                violations += grid["violations"]
        suites[tag] = per
    return suites, violations, []


def cmd_gauss(cfg, args):
    fam = _require_family(cfg, "gauss")
    alg = fam.algebra
    rng = random.Random(cfg.seed)
    suites = {}
    violations = 0
    if cfg.element is not None:
        try:
            g = alg.element_from_json(cfg.element)
        except (ValueError, TypeError) as exc:
            raise ConfigError("bad element: %s" % exc)
        try:
            fac = gauss_decompose(fam, g)
            suites["element"] = {
                "factorization": fac.to_json(),
                "reconstructed": bool(fac.check(g)),
            }
            violations += not fac.check(g)
        except NotInvertible as exc:
            suites["element"] = {"error": str(exc), "reconstructed": False}
            violations += 1
    elif args.exhaustive:
        count = good = 0
        sample = None
        for g in enumerate_gl(alg):
            fac = gauss_decompose(fam, g)
            count += 1
            good += fac.check(g)
            if sample is None:
                sample = fac.to_json()
        suites["exhaustive"] = {
            "group_order": count,
            "reconstructed": good,
            "sample_factorization": sample,
        }
        violations += count - good
    else:
        good = 0
        for _ in range(cfg.samples):
            g = sample_gl(alg, rng)
            fac = gauss_decompose(fam, g)
            good += fac.check(g)
        suites["random"] = {"checked": cfg.samples, "reconstructed": good}
        violations += cfg.samples - good
    return suites, violations, []


def cmd_crossed_module(cfg, args):
    fam = _require_family(cfg, "crossed-module")
    rng = random.Random(cfg.seed)
    report = crossed_module_verify(
        fam, rng, samples=cfg.samples, fault=args.inject_fault
    )
    suites = {"axioms": report["axioms"], "samples": report["samples"]}
    return suites, report["violations"], []


def cmd_tower(cfg, args):
    fam = _require_family(cfg, "tower")
    if cfg.scale is None:
        raise ConfigError("tower runs need a scale element")
    k_max = cfg.k_max
    env = os.environ.get("SFORGE_KMAX")
    if env is not None:
        try:
            k_max = int(env)
        except ValueError:
            raise ConfigError("SFORGE_KMAX must be an integer, got %r" % env)
        if k_max < 0:
            raise ConfigError("SFORGE_KMAX must be nonnegative")
    tower = HomotopeTower(fam.algebra, cfg.scale, k_max, fam)
    rng = random.Random(cfg.seed)
    per_level = max(1, cfg.samples // (k_max + 1))
    mutate = "drop-scale" if args.inject_fault == "drop-scale" else None

    suites = {}
    violations = 0
    rel = tower_relation_suite(tower, rng, samples_per_level=per_level, mutate=mutate)
    warnings = list(rel.pop("warnings"))
    suites["relations"] = rel
    violations += rel["violations"]
    if rel["status"] == "inconclusive":
        suites["note"] = "level budget 0: equivalences reported as inconclusive only"
        return suites, violations, warnings

    nat = split_naturality_suite(tower, rng, samples=min(cfg.samples, 50))
    suites["split_naturality"] = nat
    violations += nat["violations"]

    act = actor_relation_suite(tower, rng, samples=min(per_level, 25))
    suites["actor_relations"] = act
    violations += act["violations"]

    ops = scaled_operator_suite(tower, rng)
    suites["operators"] = ops
    violations += ops["violations"] + ops["identities"]["violations"]
    if not ops["inequivalent_found"]:
        warnings.append("no inequivalent operator pair found on this carrier")
    return suites, violations, warnings


_HANDLERS = {
    "relations": cmd_relations,
    "gauss": cmd_gauss,
    "crossed-module": cmd_crossed_module,
    "tower": cmd_tower,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sforge",
        description="relation suites, Gauss factorizations and action verifiers "
        "over finite rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "relations": "sample and exhaust the generator relations",
        "gauss": "factor unit matrices through triangular words",
        "crossed-module": "verify the five lifting axioms on sampled triples",
        "tower": "run the scaled relation and action suites level by level",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="path to a JSON config")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--samples", type=int, help="override the sample count")
        sp.add_argument("--out", help="directory for run reports")
        sp.add_argument(
            "--exhaustive",
            action="store_true",
            help="enumerate instead of sampling where supported",
        )
        if _FAULTS[name]:
            sp.add_argument(
                "--inject-fault",
                choices=_FAULTS[name],
                help="corrupt the checked identity on purpose",
            )
        else:
            sp.set_defaults(inject_fault=None)
    return parser


def _emit(report, out_dir, run_hash):
    payload = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(payload)
    if out_dir:
        stamp = time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())
        base = "%s-%s" % (stamp, run_hash[:12])
        run_dir = os.path.join(out_dir, base)
        k = 1
        while os.path.exists(run_dir):
            run_dir = os.path.join(out_dir, "%s-%d" % (base, k))
            k += 1
        os.makedirs(run_dir)
        path = os.path.join(run_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print("report written to %s" % path, file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = InstanceConfig.load(args.config, seed=args.seed, samples=args.samples)
        started = time.perf_counter()
        suites, violations, warnings = _HANDLERS[args.command](cfg, args)
        elapsed = time.perf_counter() - started
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except SforgeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print("%s finished in %.2fs" % (args.command, elapsed), file=sys.stderr)
    verdict = "fail" if violations else ("warn" if warnings else "pass")
    report = {
        "artifact": {"name": "sforge", "version": __version__},
        "command": args.command,
        "config": cfg.echo(),
        "suites": suites,
        "verdict": verdict,
        "violations": violations,
        "warnings": warnings,
    }
    _emit(report, args.out, cfg.config_hash(args.command))
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
