"""Random pure Gaussian states at fixed energy and the one-vs-rest entropy study.

Pure states are drawn as ``O.T @ Z^2 @ O``.  ``O`` is Haar-distributed on
the orthogonal symplectic group (``general``, isomorphic to U(n)) or on its
subgroup ``R (+) R`` with ``R`` in O(n) (``blockdiag``, vanishing x-p block).
The squeezing factors come from per-mode energies drawn uniformly on the
simplex ``sum(eps) = E``, ``eps_j >= 1/2``.

Every sample owns an RNG stream keyed by ``(n, ensemble, index)`` under the
master seed, so results do not depend on execution order or worker count.
"""

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import EnergyBelowVacuum, UnphysicalState
from .gstate import entropy_term, purity_residual
from .symplectic import to_interleaved

ENSEMBLES = ("general", "blockdiag")
MEASURE_NAME = "haar-orbit, per-mode energies uniform on simplex"
CSV_FIELDS = ("n", "ensemble", "samples", "energy", "mean_entropy", "stddev", "stderr")


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: tuple = ()

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(int(k) for k in self.stream_index))
        return np.random.Generator(np.random.PCG64(ss))


def _rng(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def haar_unitary(n, rng):
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def haar_orthogonal_symplectic(n, rng):
    """Haar-random element of the orthogonal symplectic group (interleaved)."""
    u = haar_unitary(n, _rng(rng))
    x, y = u.real, u.imag
    return to_interleaved(np.block([[x, y], [-y, x]]))


def haar_blockdiag_orthogonal(n, rng):
    """``R (+) R`` in blocked ordering with ``R`` Haar on O(n), returned interleaved."""
    r = haar_orthogonal(n, _rng(rng))
    zero = np.zeros((n, n))
    return to_interleaved(np.block([[r, zero], [zero, r]]))


def squeeze_for_energy(eps):
    """Squeezing factor ``z >= 1`` with ``(z^2 + z^-2) / 4 = eps``."""
    eps = np.asarray(eps, dtype=float)
    w = 2.0 * eps + np.sqrt(np.maximum(4.0 * eps * eps - 1.0, 0.0))
    return np.sqrt(w)


def sample_squeezings(n, energy, rng):
    if energy < n / 2 - 1e-12:
        raise EnergyBelowVacuum(f"energy {energy} below the vacuum value {n / 2}")
    rng = _rng(rng)
    weights = rng.dirichlet(np.ones(n)) if n > 1 else np.ones(1)
    eps = 0.5 + max(energy - n / 2, 0.0) * weights
    return squeeze_for_energy(eps)


def _draw(n, energy, ensemble, rng, random_orientation=False):
    z = sample_squeezings(n, energy, rng)
    if random_orientation:
        z = np.where(rng.integers(0, 2, n).astype(bool), 1.0 / z, z)
    if ensemble == "general":
        o = haar_orthogonal_symplectic(n, rng)
    elif ensemble == "blockdiag":
        o = haar_blockdiag_orthogonal(n, rng)
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    z2 = np.ravel(np.column_stack([z * z, 1.0 / (z * z)]))
    sigma = (o.T * z2) @ o
    return 0.5 * (sigma + sigma.T)


def sample_pure(n, energy, ensemble, rng, tol=1e-8, random_orientation=False):
    """One random pure state of ``n`` modes with ``Tr(sigma) / 4 = energy``.

    With ``random_orientation`` each mode is squeezed in x or in p with equal
    probability before the passive transformation.  This changes nothing in
    distribution for ``general`` but lets ``blockdiag`` reach states whose
    position block is not bounded below by the identity.
    """
    sigma = _draw(n, energy, ensemble, _rng(rng), random_orientation)
    res = purity_residual(sigma)
    if res > tol:
        raise UnphysicalState(f"sampled state failed the purity check (residual {res:.3e})")
    return sigma


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    ensemble: str
    samples: int
    energy: float
    mean_entropy: float
    stddev: float
    stderr: float


def ensemble_code(ensemble):
    return ENSEMBLES.index(ensemble)


def cell_entropies(n, ensemble, energy, seed, start, stop, random_orientation=False):
    """One-vs-rest entropies (mode 1, nats) for sample indices ``start..stop-1``."""
    code = ensemble_code(ensemble)
    out = np.empty(stop - start)
    for k, idx in enumerate(range(start, stop)):
        rng = RngStream(seed, (n, code, idx)).generator()
        sigma = sample_pure(n, energy, ensemble, rng, random_orientation=random_orientation)
        local = sigma[:2, :2]
        nu = math.sqrt(max(local[0, 0] * local[1, 1] - local[0, 1] ** 2, 1.0))
        out[k] = float(entropy_term(nu))
    return out


def _cell_task(args):
    return cell_entropies(*args)


def aggregate(n, ensemble, energy, values):
    values = np.asarray(values, dtype=float)
    count = values.size
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if count > 1 else 0.0
    return ExperimentRecord(n, ensemble, count, float(energy), mean, std, std / math.sqrt(count))


def worker_count():
    raw = os.environ.get("SYMPLECTICA_THREADS", "0").strip() or "0"
    want = int(raw)
    if want <= 0:
        want = os.cpu_count() or 1
    return want


def run_experiment(n_values, per_mode_energy=5.0, samples=10000, seed=0, workers=None, chunk=500,
                   random_orientation=False):
    """Average one-vs-rest entropy per mode count and ensemble.

    Returns one :class:`ExperimentRecord` per ``(n, ensemble)`` in the order
    ``n`` ascending, ``general`` before ``blockdiag``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    workers = worker_count() if workers is None else max(int(workers), 1)
    cells = [(int(n), ens) for n in n_values for ens in ENSEMBLES]
    tasks = []
    for n, ens in cells:
        energy = per_mode_energy * n
        for start in range(0, samples, chunk):
            tasks.append((n, ens, energy, seed, start, min(start + chunk, samples),
                          random_orientation))

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_cell_task, tasks))
    else:
        parts = [_cell_task(t) for t in tasks]

    records = []
    at = 0
    for n, ens in cells:
        pieces = []
        while at < len(tasks) and tasks[at][:2] == (n, ens):
            pieces.append(parts[at])
            at += 1
        records.append(aggregate(n, ens, per_mode_energy * n, np.concatenate(pieces)))
    return records


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow([
            rec.n, rec.ensemble, rec.samples,
            f"{rec.energy:.12g}", f"{rec.mean_entropy:.12g}",
            f"{rec.stddev:.12g}", f"{rec.stderr:.12g}",
        ])
    return buf.getvalue()


def records_from_csv(text):
    rows = csv.DictReader(io.StringIO(text))
    return [
        ExperimentRecord(int(r["n"]), r["ensemble"], int(r["samples"]), float(r["energy"]),
                         float(r["mean_entropy"]), float(r["stddev"]), float(r["stderr"]))
        for r in rows
    ]


def experiment_metadata(seed, per_mode_energy, samples, n_values, random_orientation=False):
    return {
        "seed": seed,
        "measure": MEASURE_NAME,
        "squeezing_orientation": "random" if random_orientation else "x",
        "entropy_base": "e",
        "entropy_units": "nats",
        "energy_convention": "Tr(sigma)/4, vacuum = n/2",
        "per_mode_energy": per_mode_energy,
        "samples": samples,
        "n_values": list(n_values),
        "bipartition": "mode 1 vs rest",
        "tool_version": __version__,
    }


def records_as_dicts(records):
    return [asdict(r) for r in records]
