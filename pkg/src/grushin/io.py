"""Reading and writing grid and dual data.

Two formats:

* CSV. Grid files have one row per grid point with the columns
  ``xp1..xp{d'}, xpp1..xpp{d''}, real, imag``; frequency-domain grids use
  ``xi1..`` in place of ``xpp``. Dual files have the columns
  ``kind, k1..k{d'}, xi1..xi{d''}, xp1..xp{d'}, real, imag`` where
  ``kind`` is ``coef`` for Hermite coefficients (``xp`` columns empty) or
  ``zero`` for samples of the ``xi''=0`` slice (``k`` columns empty).
* A JSON header next to a raw little-endian ``complex128`` file, chosen
  whenever the path ends in ``.json``. The header records the configuration
  so the data can be read back without any other input.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .grids import ConfigError, DualCoefficients, GridFunction, GrushinConfig

FORMAT_VERSION = 1


def _grid_columns(cfg: GrushinConfig, domain: str) -> list[str]:
    second = "xpp" if domain == "x" else "xi"
    return ([f"xp{j + 1}" for j in range(cfg.d_prime)]
            + [f"{second}{j + 1}" for j in range(cfg.d_doubleprime)] + ["real", "imag"])


def _dual_columns(cfg: GrushinConfig) -> list[str]:
    return (["kind"] + [f"k{j + 1}" for j in range(cfg.d_prime)]
            + [f"xi{j + 1}" for j in range(cfg.d_doubleprime)]
            + [f"xp{j + 1}" for j in range(cfg.d_prime)] + ["real", "imag"])


def _header(kind: str, cfg: GrushinConfig, **extra) -> dict:
    return {"format": f"grushin-{kind}", "format_version": FORMAT_VERSION,
            "config": cfg.to_dict(), "dtype": "<c16", **extra}


def write_grid(path, g: GridFunction) -> None:
    path = Path(path)
    if path.suffix == ".json":
        data = path.with_suffix(".bin")
        np.ascontiguousarray(g.values, dtype="<c16").tofile(data)
        head = _header("grid", g.config, domain=g.domain, shape=list(g.values.shape), data=data.name)
        path.write_text(json.dumps(head, indent=2))
        return
    pts = g.config.mesh(g.domain).reshape(-1, g.config.d_prime + g.config.d_doubleprime)
    vals = g.values.reshape(-1)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_grid_columns(g.config, g.domain))
        for p, v in zip(pts, vals):
            w.writerow([repr(float(c)) for c in p] + [repr(float(v.real)), repr(float(v.imag))])


def write_dual(path, F: DualCoefficients) -> None:
    path = Path(path)
    cfg = F.config
    if path.suffix == ".json":
        data = path.with_suffix(".bin")
        with data.open("wb") as fh:
            np.ascontiguousarray(F.values, dtype="<c16").tofile(fh)
            np.ascontiguousarray(F.zero_slice, dtype="<c16").tofile(fh)
        head = _header("dual", cfg, values_shape=list(F.values.shape),
                       zero_shape=list(F.zero_slice.shape), data=data.name)
        path.write_text(json.dumps(head, indent=2))
        return
    mis = cfg.multi_indices()
    xi_axis = cfg.xi_axis()
    xi_pts = np.stack(np.meshgrid(*([xi_axis] * cfg.d_doubleprime), indexing="ij"), -1).reshape(-1, cfg.d_doubleprime)
    vals = F.values.reshape(len(mis), -1)
    zero_flat = cfg.xi_zero_index * sum(cfg.N_doubleprime ** j for j in range(cfg.d_doubleprime))
    xp_axis = cfg.x_prime_axis()
    xp_pts = np.stack(np.meshgrid(*([xp_axis] * cfg.d_prime), indexing="ij"), -1).reshape(-1, cfg.d_prime)
    blank_p = [""] * cfg.d_prime
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_dual_columns(cfg))
        for i, mi in enumerate(mis):
            for j, xi in enumerate(xi_pts):
                if j == zero_flat:
                    continue
                v = vals[i, j]
                w.writerow(["coef", *mi.entries, *(repr(float(c)) for c in xi), *blank_p, repr(float(v.real)), repr(float(v.imag))])
        for p, v in zip(xp_pts, F.zero_slice.reshape(-1)):
            w.writerow(["zero", *blank_p, *(["0.0"] * cfg.d_doubleprime), *(repr(float(c)) for c in p),
                        repr(float(v.real)), repr(float(v.imag))])


def _load_header(path: Path) -> tuple[dict, GrushinConfig, np.ndarray]:
    head = json.loads(path.read_text())
    if not isinstance(head, dict) or "config" not in head or "data" not in head:
        raise ValueError(f"{path} is not a grushin data header")
    cfg = GrushinConfig.from_dict(head["config"])
    raw = np.fromfile(path.parent / head["data"], dtype=head.get("dtype", "<c16"))
    return head, cfg, raw


def _check_config(found: GrushinConfig, expected: GrushinConfig | None) -> GrushinConfig:
    if expected is not None and found != expected:
        raise ConfigError("data file configuration differs from the supplied config")
    return found


def read_grid(path, config: GrushinConfig | None = None) -> GridFunction:
    path = Path(path)
    if path.suffix == ".json":
        head, cfg, raw = _load_header(path)
        if head.get("format") != "grushin-grid":
            raise ValueError(f"{path} does not hold grid data")
        cfg = _check_config(cfg, config)
        return GridFunction(cfg, raw.reshape(head["shape"]), head.get("domain", "x"))
    if config is None:
        raise ConfigError("reading CSV grid data needs a config")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    domain = "xi" if any(h.startswith("xi") for h in header) else "x"
    if header != _grid_columns(config, domain):
        raise ValueError(f"unexpected CSV columns {header}")
    arr = np.array(body, dtype=float)
    expected = config.mesh(domain).reshape(-1, config.d_prime + config.d_doubleprime)
    if arr.shape[0] != expected.shape[0] or not np.allclose(arr[:, :-2], expected, rtol=0, atol=1e-9):
        raise ValueError("CSV grid points do not match the config grid")
    vals = (arr[:, -2] + 1j * arr[:, -1]).reshape(config.shape)
    return GridFunction(config, vals, domain)


def read_dual(path, config: GrushinConfig | None = None) -> DualCoefficients:
    path = Path(path)
    if path.suffix == ".json":
        head, cfg, raw = _load_header(path)
        if head.get("format") != "grushin-dual":
            raise ValueError(f"{path} does not hold dual data")
        cfg = _check_config(cfg, config)
        nv = int(np.prod(head["values_shape"]))
        return DualCoefficients(cfg, raw[:nv].reshape(head["values_shape"]),
                                raw[nv:].reshape(head["zero_shape"]))
    if config is None:
        raise ConfigError("reading CSV dual data needs a config")
    cfg = config
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != _dual_columns(cfg):
        raise ValueError(f"unexpected CSV columns {rows[0]}")
    index = {m.entries: i for i, m in enumerate(cfg.multi_indices())}
    vals = np.zeros((len(index),) + cfg.xi_shape, complex)
    zero = np.zeros(cfg.prime_shape, complex)
    dp, dd = cfg.d_prime, cfg.d_doubleprime
    xp_axis = cfg.x_prime_axis()
    for row in rows[1:]:
        kind = row[0]
        v = complex(float(row[-2]), float(row[-1]))
        if kind == "coef":
            k = tuple(int(c) for c in row[1:1 + dp])
            xi = np.array([float(c) for c in row[1 + dp:1 + dp + dd]])
            j = tuple(int(round(c / cfg.dxi)) + cfg.xi_zero_index for c in xi)
            vals[(index[k],) + j] = v
        elif kind == "zero":
            xp = [float(c) for c in row[1 + dp + dd:1 + 2 * dp + dd]]
            idx = tuple(int(np.argmin(np.abs(xp_axis - c))) for c in xp)
            zero[idx] = v
        else:
            raise ValueError(f"unknown row kind {kind!r}")
    return DualCoefficients(cfg, vals, zero)


def read_config(path) -> GrushinConfig:
    return GrushinConfig.from_json(Path(path).read_text())
