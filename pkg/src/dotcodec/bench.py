"""End-to-end encode / perturb / decode / score benchmark.

A benchmark config is flat ``key = value`` text with one section per sweep
dimension (configparser syntax). Every cell of the sweep
(scene seed x scheme x blur x noise) runs the full pipeline on one
synthetic scene and contributes one CSV row; per-scheme summary rows
aggregate F1 over seeds (mean and sample standard deviation of the
per-seed means). Entropy and reversibility are computed on the clean
coding of each (seed, scheme) and repeated on its perturbation rows.

Determinism: seeds come only from the config. The noise seed of a cell is
``noise_seed + i`` where i is the cell's index in the canonical row order
(seeds, then schemes, then blur values, then noise values, each as listed
in the resolved config). The manifest written next to the outputs contains
the fully resolved config and reproduces the run byte for byte.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .decode import DecodeSpec, detect_local_maxima
from .encoders import SCHEMES, CodingSpec, encode
from .evaluate import score
from .geometry import dot_mask
from .metrics import coding_entropy, reversibility, reversibility_dilated
from .synth import PerturbSpec, SceneSpec, generate_scene, perturb

CELL_COLUMNS = ("scene_seed", "scheme", "blur_sigma", "noise_sigma",
                "n_true", "n_detected", "precision", "recall",
                "f1_standard", "f1_paper_literal",
                "entropy_bits", "reversibility", "reversibility_dilated")
SUMMARY_COLUMNS = ("scheme", "n_seeds", "f1_mean", "f1_std",
                   "precision_mean", "recall_mean", "entropy_mean",
                   "reversibility_mean", "reversibility_dilated_mean")


@dataclass(frozen=True)
class BenchConfig:
    """Fully resolved benchmark configuration."""

    height: int = 128
    width: int = 128
    n_cells: int = 25
    min_spacing: float = 4.0
    crowded_fraction: float = 0.5
    cell_radius: float = 6.0
    seeds: tuple[int, ...] = (1, 2, 3)
    schemes: tuple[str, ...] = ("dot", "proximity", "repel")
    alpha: float = 0.8
    radius_cutoff: float = 12.0
    sigma: float = 3.0
    kernel_size: int = 13
    normalization: str = "unit_mass"
    blur_sigmas: tuple[float, ...] = (0.0,)
    noise_sigmas: tuple[float, ...] = (0.0,)
    noise_seed: int = 0
    nms_radius: float = 6.0
    threshold: float = 0.1
    threshold_mode: str = "relative_to_max"
    bin_count: int = 8
    dilation_diameter: float = 5.0
    match_threshold: float = 6.0

    def __post_init__(self):
        for scheme in self.schemes:
            if scheme not in SCHEMES:
                raise ValueError(f"unknown scheme {scheme!r} in benchmark config")
        if not self.seeds:
            raise ValueError("benchmark needs at least one scene seed")

    def scene_spec(self, seed: int) -> SceneSpec:
        return SceneSpec(height=self.height, width=self.width, n_cells=self.n_cells,
                         min_spacing=self.min_spacing,
                         crowded_fraction=self.crowded_fraction,
                         cell_radius=self.cell_radius, seed=seed)

    def coding_spec(self, scheme: str) -> CodingSpec:
        return CodingSpec(scheme=scheme, alpha=self.alpha,
                          radius_cutoff=self.radius_cutoff, sigma=self.sigma,
                          kernel_size=self.kernel_size,
                          normalization=self.normalization)

    def decode_spec(self) -> DecodeSpec:
        return DecodeSpec(nms_radius=self.nms_radius,
                          threshold_mode=self.threshold_mode,
                          threshold=self.threshold)

    def sections(self) -> dict[str, dict]:
        """Resolved values grouped the way the config file groups them."""
        return {
            "scene": {"height": self.height, "width": self.width,
                      "n_cells": self.n_cells, "min_spacing": self.min_spacing,
                      "crowded_fraction": self.crowded_fraction,
                      "cell_radius": self.cell_radius,
                      "seeds": ",".join(str(s) for s in self.seeds)},
            "coding": {"schemes": ",".join(self.schemes), "alpha": self.alpha,
                       "radius_cutoff": self.radius_cutoff, "sigma": self.sigma,
                       "kernel_size": self.kernel_size,
                       "normalization": self.normalization},
            "perturb": {"blur_sigmas": ",".join(_fmt(b) for b in self.blur_sigmas),
                        "noise_sigmas": ",".join(_fmt(n) for n in self.noise_sigmas),
                        "noise_seed": self.noise_seed},
            "decode": {"nms_radius": self.nms_radius, "threshold": self.threshold,
                       "threshold_mode": self.threshold_mode},
            "metrics": {"bin_count": self.bin_count,
                        "dilation_diameter": self.dilation_diameter},
            "eval": {"match_threshold": self.match_threshold},
        }


def _fmt(value) -> str:
    from .io import fmt_value

    return fmt_value(value)


def load_config(path) -> BenchConfig:
    """Parse a benchmark config (or a manifest of a previous run)."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read benchmark config {path}")
    defaults = BenchConfig()

    def get(section, key, cast, fallback):
        if parser.has_option(section, key):
            return cast(parser.get(section, key))
        return fallback

    def csv_list(cast):
        return lambda text: tuple(cast(item.strip()) for item in text.split(",") if item.strip())

    cell_radius = get("scene", "cell_radius", float, defaults.cell_radius)
    return BenchConfig(
        height=get("scene", "height", int, defaults.height),
        width=get("scene", "width", int, defaults.width),
        n_cells=get("scene", "n_cells", int, defaults.n_cells),
        min_spacing=get("scene", "min_spacing", float, defaults.min_spacing),
        crowded_fraction=get("scene", "crowded_fraction", float, defaults.crowded_fraction),
        cell_radius=cell_radius,
        seeds=tuple(sorted(get("scene", "seeds", csv_list(int), defaults.seeds))),
        schemes=get("coding", "schemes", csv_list(str), defaults.schemes),
        alpha=get("coding", "alpha", float, defaults.alpha),
        radius_cutoff=get("coding", "radius_cutoff", float, 2.0 * cell_radius),
        sigma=get("coding", "sigma", float, cell_radius / 2.0),
        kernel_size=get("coding", "kernel_size", int, 2 * int(round(cell_radius)) + 1),
        normalization=get("coding", "normalization", str, defaults.normalization),
        blur_sigmas=tuple(sorted(get("perturb", "blur_sigmas", csv_list(float), defaults.blur_sigmas))),
        noise_sigmas=tuple(sorted(get("perturb", "noise_sigmas", csv_list(float), defaults.noise_sigmas))),
        noise_seed=get("perturb", "noise_seed", int, defaults.noise_seed),
        nms_radius=get("decode", "nms_radius", float, cell_radius),
        threshold=get("decode", "threshold", float, defaults.threshold),
        threshold_mode=get("decode", "threshold_mode", str, defaults.threshold_mode),
        bin_count=get("metrics", "bin_count", int, defaults.bin_count),
        dilation_diameter=get("metrics", "dilation_diameter", float, defaults.dilation_diameter),
        match_threshold=get("eval", "match_threshold", float, cell_radius),
    )


def run_benchmark(config: BenchConfig, outdir) -> tuple[list[dict], list[dict]]:
    """Run the sweep and write cells.csv, summary.csv and manifest.txt.

    Returns the cell rows and summary rows as dicts keyed by the CSV
    column names.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    decode_spec = config.decode_spec()

    rows: list[dict] = []
    cell_index = 0
    for seed in config.seeds:
        try:
            scene = generate_scene(config.scene_spec(seed))
        except ValueError as exc:
            raise ValueError(f"benchmark cell (seed={seed}): {exc}") from exc
        raw_mask = dot_mask(scene)
        for scheme in config.schemes:
            coding = encode(scene, config.coding_spec(scheme))
            entropy = coding_entropy(coding, config.bin_count)
            rev = reversibility(coding, raw_mask)
            rev_dilated = reversibility_dilated(coding, scene, config.dilation_diameter)
            for blur in config.blur_sigmas:
                for noise in config.noise_sigmas:
                    noisy = perturb(coding, PerturbSpec(blur_sigma=blur, noise_sigma=noise,
                                                        seed=config.noise_seed + cell_index))
                    cell_index += 1
                    detections = detect_local_maxima(noisy, decode_spec)
                    report = score(detections, scene, config.match_threshold)
                    rows.append({
                        "scene_seed": seed, "scheme": scheme,
                        "blur_sigma": blur, "noise_sigma": noise,
                        "n_true": len(scene), "n_detected": len(detections),
                        "precision": report.precision, "recall": report.recall,
                        "f1_standard": report.f1_standard,
                        "f1_paper_literal": report.f1_paper_literal,
                        "entropy_bits": entropy, "reversibility": rev,
                        "reversibility_dilated": rev_dilated,
                    })

    summary = _summarize(config, rows)
    _write_csv(outdir / "cells.csv", CELL_COLUMNS, rows)
    _write_csv(outdir / "summary.csv", SUMMARY_COLUMNS, summary)
    manifest = {"run": {"tool": "dotcodec", "version": __version__,
                        "subcommand": "bench", "output_dir": str(outdir)}}
    manifest.update(config.sections())
    _write_manifest_text(outdir / "manifest.txt", manifest)
    return rows, summary


def _summarize(config: BenchConfig, rows: list[dict]) -> list[dict]:
    summary = []
    for scheme in config.schemes:
        scheme_rows = [r for r in rows if r["scheme"] == scheme]
        per_seed = []
        for seed in config.seeds:
            cells = [r["f1_standard"] for r in scheme_rows if r["scene_seed"] == seed]
            per_seed.append(sum(cells) / len(cells))
        mean = sum(per_seed) / len(per_seed)
        if len(per_seed) > 1:
            std = (sum((x - mean) ** 2 for x in per_seed) / (len(per_seed) - 1)) ** 0.5
        else:
            std = 0.0
        summary.append({
            "scheme": scheme, "n_seeds": len(config.seeds),
            "f1_mean": mean, "f1_std": std,
            "precision_mean": _mean(scheme_rows, "precision"),
            "recall_mean": _mean(scheme_rows, "recall"),
            "entropy_mean": _mean(scheme_rows, "entropy_bits"),
            "reversibility_mean": _mean(scheme_rows, "reversibility"),
            "reversibility_dilated_mean": _mean(scheme_rows, "reversibility_dilated"),
        })
    return summary


def _mean(rows: list[dict], key: str) -> float:
    return sum(r[key] for r in rows) / len(rows)


def _write_csv(path, columns, rows) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_manifest_text(path, sections: dict[str, dict]) -> None:
    from .io import write_manifest

    write_manifest(path, sections)
