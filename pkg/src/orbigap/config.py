"""Field-description and twin-request files.

Both are UTF-8 key/value text: one ``key: value`` pair per line, ``#``
comments, optional ``[section]`` headers (organizational only), repeated
keys allowed where noted.  Example field file::

    poly: x^3 - 2
    disc: -108
    splitting: 2 = [2]      # declared norms of primes above an excluded prime

Example request file::

    field: cubic.field      # or inline poly:/disc:/splitting:
    ram_real: [0]
    ram_primes: ["5:0"]
    trace: a
    k: 3
    window: 60
    height: 100000
    manifold: false
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field

from .errors import InvalidInput
from .numberfield import make_field
from .quaternion import parse_opaque

_KNOWN_REQUEST_KEYS = {
    "field", "poly", "disc", "splitting", "ram_real", "ram_primes", "ram_opaque",
    "trace", "radicand", "k", "window", "height", "manifold", "p0", "policy",
    "zeta_cutoff", "precision", "max_tuples", "nmax", "cyclo_height",
    "segment_size", "workers", "target",
}


def parse_key_values(text):
    """List of (key, value) pairs, preserving order and repeats."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            continue
        if ":" not in line:
            raise InvalidInput(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, _, value = line.partition(":")
        out.append((key.strip(), value.strip()))
    return out


def _parse_list(value):
    if not value.startswith("["):
        return [v.strip() for v in value.split(",") if v.strip()]
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"bad list value {value!r}") from exc


def _parse_splitting(value):
    # "2 = [2]" declares the norms of the primes above 2
    left, sep, right = value.partition("=")
    if not sep:
        raise InvalidInput(f"splitting declaration needs 'p = [norms]', got {value!r}")
    try:
        p = int(left.strip())
    except ValueError as exc:
        raise InvalidInput(f"bad prime in splitting declaration {value!r}") from exc
    norms = [int(n) for n in _parse_list(right.strip())]
    return p, tuple(norms)


def _parse_bool(value):
    v = value.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise InvalidInput(f"bad boolean {value!r}")


def _parse_int(value):
    try:
        return int(float(value)) if ("e" in value.lower() or "." in value) else int(value)
    except ValueError as exc:
        raise InvalidInput(f"bad integer {value!r}") from exc


@dataclass
class FieldDescription:
    poly_text: str
    disc: int | None = None
    splitting: dict = dc_field(default_factory=dict)

    def build(self):
        return make_field(self.poly_text, self.disc, self.splitting)

    def echo(self):
        out = {"poly": self.poly_text}
        if self.disc is not None:
            out["disc"] = self.disc
        if self.splitting:
            out["splitting"] = {str(p): list(ns) for p, ns in sorted(self.splitting.items())}
        return out


def field_description_from_pairs(pairs):
    poly_text = None
    disc = None
    splitting = {}
    for key, value in pairs:
        if key == "poly":
            poly_text = value
        elif key == "disc":
            disc = _parse_int(value)
        elif key == "splitting":
            p, norms = _parse_splitting(value)
            splitting[p] = norms
    if poly_text is None:
        raise InvalidInput("field description needs a 'poly:' line")
    return FieldDescription(poly_text, disc, splitting)


def load_field_file(path):
    with open(path, encoding="utf-8") as handle:
        return field_description_from_pairs(parse_key_values(handle.read()))


@dataclass
class TwinRequest:
    """Parsed twin-construction request."""

    field_desc: FieldDescription
    ram_real: tuple = ()
    ram_prime_labels: tuple = ()
    ram_opaque: tuple = ()
    extensions: tuple = ()  # (("trace"|"radicand", text), ...)
    k: int = 2
    window: int = 0
    height: int = 100_000
    manifold: bool = False
    p0_label: str | None = None
    policy: str = "sliding"
    zeta_cutoff: int = 1_000_000
    precision: int = 128
    max_tuples: int = 10
    nmax: int | None = None
    cyclo_height: int = 10_000
    segment_size: int = 1 << 20
    workers: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInput("twin requests need k >= 2")
        if not self.extensions:
            raise InvalidInput("at least one trace or radicand is required")

    def echo(self):
        out = {
            "field": self.field_desc.echo(),
            "ram_real": list(self.ram_real),
            "ram_primes": list(self.ram_prime_labels),
            "ram_opaque": [str(o) for o in self.ram_opaque],
            "extensions": [[kind, text] for kind, text in self.extensions],
            "k": self.k,
            "window": self.window,
            "height": self.height,
            "manifold": self.manifold,
            "policy": self.policy,
            "zeta_cutoff": self.zeta_cutoff,
            "precision": self.precision,
            "max_tuples": self.max_tuples,
            "cyclo_height": self.cyclo_height,
            "segment_size": self.segment_size,
        }
        if self.p0_label is not None:
            out["p0"] = self.p0_label
        if self.nmax is not None:
            out["nmax"] = self.nmax
        return out


def request_from_pairs(pairs, base_dir="."):
    values = {}
    extensions = []
    field_pairs = []
    for key, value in pairs:
        if key not in _KNOWN_REQUEST_KEYS:
            raise InvalidInput(f"unknown request key {key!r}")
        if key in ("trace", "radicand"):
            extensions.append((key, value))
        elif key in ("poly", "disc", "splitting"):
            field_pairs.append((key, value))
        elif key in values:
            raise InvalidInput(f"duplicate request key {key!r}")
        else:
            values[key] = value
    if "field" in values:
        if field_pairs:
            raise InvalidInput("give either 'field:' or inline poly/disc, not both")
        field_desc = load_field_file(os.path.join(base_dir, values["field"]))
    else:
        field_desc = field_description_from_pairs(field_pairs)

    def get_int(key, default):
        return _parse_int(values[key]) if key in values else default

    ram_real = tuple(int(i) for i in _parse_list(values["ram_real"])) if "ram_real" in values else ()
    ram_primes = tuple(str(s) for s in _parse_list(values["ram_primes"])) if "ram_primes" in values else ()
    ram_opaque = tuple(parse_opaque(str(s)) for s in _parse_list(values["ram_opaque"])) if "ram_opaque" in values else ()
    return TwinRequest(
        field_desc=field_desc,
        ram_real=ram_real,
        ram_prime_labels=ram_primes,
        ram_opaque=ram_opaque,
        extensions=tuple(extensions),
        k=get_int("k", 2),
        window=get_int("window", 0),
        height=get_int("height", 100_000),
        manifold=_parse_bool(values["manifold"]) if "manifold" in values else False,
        p0_label=values.get("p0"),
        policy=values.get("policy", "sliding"),
        zeta_cutoff=get_int("zeta_cutoff", 1_000_000),
        precision=get_int("precision", 128),
        max_tuples=get_int("max_tuples", 10),
        nmax=get_int("nmax", None) if "nmax" in values else None,
        cyclo_height=get_int("cyclo_height", 10_000),
        segment_size=get_int("segment_size", 1 << 20),
        workers=get_int("workers", 1),
    )


def load_request_file(path):
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return request_from_pairs(parse_key_values(text), base_dir=os.path.dirname(path) or ".")


def request_from_echo(echo):
    """Rebuild a request from the echo block of a report (for re-verification)."""
    fd = echo["field"]
    splitting = {int(p): tuple(ns) for p, ns in fd.get("splitting", {}).items()}
    field_desc = FieldDescription(fd["poly"], fd.get("disc"), splitting)
    return TwinRequest(
        field_desc=field_desc,
        ram_real=tuple(echo.get("ram_real", ())),
        ram_prime_labels=tuple(echo.get("ram_primes", ())),
        ram_opaque=tuple(parse_opaque(s) for s in echo.get("ram_opaque", ())),
        extensions=tuple((kind, text) for kind, text in echo.get("extensions", ())),
        k=echo["k"],
        window=echo["window"],
        height=echo["height"],
        manifold=echo.get("manifold", False),
        p0_label=echo.get("p0"),
        policy=echo.get("policy", "sliding"),
        zeta_cutoff=echo.get("zeta_cutoff", 1_000_000),
        precision=echo.get("precision", 128),
        max_tuples=echo.get("max_tuples", 10),
        nmax=echo.get("nmax"),
        cyclo_height=echo.get("cyclo_height", 10_000),
        segment_size=echo.get("segment_size", 1 << 20),
        workers=1,
    )
