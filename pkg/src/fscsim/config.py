"""Run configuration: sectioned key=value files describing one pipeline run.

Paths are resolved relative to the config file so a config can sit next
to its fixtures. Validation happens before any computation: every
referenced operator file must exist and share one qubit count.
"""

import configparser
from dataclasses import dataclass, replace
from pathlib import Path

from .optimize import OptimizerConfig
from .pauli import load_pauli_file

METHODS = ("vqd", "ssvqe", "fsc", "direct", "oracle")
OPERATOR_KEYS = ("hamiltonian", "dipole_x", "dipole_y", "dipole_z", "number", "sz", "s2")

DEFAULT_PENALTY_WEIGHT = 10000.0


@dataclass(frozen=True)
class StateSpec:
    """One target state: reference pattern plus its symmetry sector."""

    label: str
    reference: str
    sector_n: float
    sector_sz: float
    sector_s2: float


@dataclass(frozen=True)
class RunConfig:
    operator_paths: dict
    states: tuple
    methods: tuple
    output: Path
    uccsd_depth: int = 2
    ham_depth: int = 2
    fsc_depth: int = 4
    fsc_n: int = 2
    penalty_weight: float = DEFAULT_PENALTY_WEIGHT
    optimizer: OptimizerConfig = OptimizerConfig()

    @property
    def n_states(self):
        return len(self.states)

    def with_overrides(self, output=None, seed=None):
        cfg = self
        if output is not None:
            cfg = replace(cfg, output=Path(output))
        if seed is not None:
            cfg = replace(cfg, optimizer=replace(cfg.optimizer, seed=int(seed)))
        return cfg


def _parse_reference(pattern, label):
    """Bit patterns, optionally summed: '1100' or '1001+0110'."""
    parts = [p.strip() for p in pattern.split("+")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"state {label!r}: empty reference pattern")
    width = len(parts[0])
    for p in parts:
        if len(p) != width or set(p) - {"0", "1"}:
            raise ValueError(f"state {label!r}: bad reference pattern {pattern!r}")
    return parts


def reference_indices(spec: StateSpec):
    """Basis indices of the (equal-weight) reference superposition."""
    parts = _parse_reference(spec.reference, spec.label)
    return [int(p, 2) for p in parts], len(parts[0])


def load_config(path) -> RunConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file {path} not found")
    base = path.resolve().parent

    if "fixtures" not in parser:
        raise ValueError("config needs a [fixtures] section")
    fixtures = parser["fixtures"]
    missing = [k for k in OPERATOR_KEYS if k not in fixtures]
    if missing:
        raise ValueError(f"[fixtures] missing keys: {', '.join(missing)}")
    operator_paths = {k: (base / fixtures[k]).resolve() for k in OPERATOR_KEYS}

    ansatz = parser["ansatz"] if "ansatz" in parser else {}
    opt = parser["optimizer"] if "optimizer" in parser else {}
    optimizer = OptimizerConfig(
        gradient_step=float(opt.get("gradient_step", 1e-6)),
        gradient_tol=float(opt.get("gradient_tol", 1e-8)),
        objective_tol=float(opt.get("objective_tol", 1e-10)),
        max_iterations=int(opt.get("max_iterations", 2000)),
        restarts=int(opt.get("restarts", 8)),
        seed=int(opt.get("seed", 11)),
    )

    run = parser["run"] if "run" in parser else {}
    methods = tuple(run.get("methods", "").split())
    output = Path(run.get("output", "out"))
    if not output.is_absolute():
        output = base / output

    states = []
    for section in parser.sections():
        if not section.startswith("state"):
            continue
        body = parser[section]
        for key in ("reference", "sector_n", "sector_sz", "sector_s2"):
            if key not in body:
                raise ValueError(f"[{section}] missing {key}")
        states.append(
            StateSpec(
                body.get("label", section.replace(" ", "_")),
                body["reference"],
                float(body["sector_n"]),
                float(body["sector_sz"]),
                float(body["sector_s2"]),
            )
        )

    return RunConfig(
        operator_paths,
        tuple(states),
        methods,
        output,
        uccsd_depth=int(ansatz.get("uccsd_depth", 2)),
        ham_depth=int(ansatz.get("ham_depth", 2)),
        fsc_depth=int(ansatz.get("fsc_depth", 4)),
        fsc_n=int(ansatz.get("fsc_n", 2)),
        penalty_weight=float(opt.get("penalty_weight", DEFAULT_PENALTY_WEIGHT)),
        optimizer=optimizer,
    )


def validate_config(config: RunConfig):
    """Pre-compute checks; raises ValueError with a description on failure."""
    if not config.methods:
        raise ValueError("method set is empty")
    unknown = [m for m in config.methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods: {', '.join(unknown)}")
    if ("fsc" in config.methods or "direct" in config.methods) and (
        "vqd" not in config.methods and "ssvqe" not in config.methods
    ):
        raise ValueError("fsc/direct need trained states: add vqd or ssvqe")
    if "fsc" in config.methods and "vqd" not in config.methods:
        raise ValueError("fsc trains on vqd states: add vqd to methods")
    if len(config.states) < 2 and not config.methods == ("oracle",):
        raise ValueError("need at least two target states")
    if config.fsc_n < 2 or config.fsc_n % 2 != 0:
        raise ValueError("fsc_n must be an even integer >= 2")
    for d in (config.uccsd_depth, config.ham_depth, config.fsc_depth):
        if d < 0:
            raise ValueError("ansatz depths must be non-negative")
    if config.penalty_weight <= 0:
        raise ValueError("penalty_weight must be positive")

    for key, p in config.operator_paths.items():
        if not p.is_file():
            raise ValueError(f"{key} file missing: {p}")
    qubit_counts = {}
    for key, p in config.operator_paths.items():
        qubit_counts[key] = load_pauli_file(p).n_qubits
    counts = set(qubit_counts.values())
    if len(counts) > 1:
        raise ValueError(f"operator qubit counts differ: {qubit_counts}")
    n_qubits = counts.pop()

    electron_counts = set()
    for spec in config.states:
        indices, width = reference_indices(spec)
        if width != n_qubits:
            raise ValueError(
                f"state {spec.label!r}: reference width {width} != {n_qubits} qubits"
            )
        for idx in indices:
            electron_counts.add(bin(idx).count("1"))
    if len(electron_counts) > 1:
        raise ValueError(f"references mix electron counts: {sorted(electron_counts)}")
    labels = [s.label for s in config.states]
    if len(set(labels)) != len(labels):
        raise ValueError("state labels must be unique")
    return n_qubits
