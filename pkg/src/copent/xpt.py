"""SAS Transport (XPORT version 5) ingestion.

The format is a sequence of 80-byte records: ASCII header records framing a
variable-descriptor (NAMESTR) section, then observation records holding
fixed-stride rows whose numeric fields are IBM mainframe doubles (1 sign
bit, 7-bit base-16 exponent biased by 64, 56-bit fraction).  Only the first
member of a library is read, and only version 5 is supported: the extended
v8/v9 member headers are rejected with a clear error.

Character variables are not silently dropped; they become fully-missing
columns plus a warning so that column positions stay alignable with
published variable indices.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from urllib.request import Request, urlopen

import numpy as np

from .dataset import Column, Dataset
from .errors import DataError

RECORD_LEN = 80

_LIBRARY_SIG = b"HEADER RECORD*******LIBRARY HEADER RECORD!!!!!!!"
_MEMBER_SIG = b"HEADER RECORD*******MEMBER  HEADER RECORD!!!!!!!"
_DSCRPTR_SIG = b"HEADER RECORD*******DSCRPTR HEADER RECORD!!!!!!!"
_NAMESTR_SIG = b"HEADER RECORD*******NAMESTR HEADER RECORD!!!!!!!"
_OBS_SIG = b"HEADER RECORD*******OBS     HEADER RECORD!!!!!!!"
_V8_SIGS = (b"HEADER RECORD*******LIBV8   HEADER RECORD!!!!!!!",
            b"HEADER RECORD*******MEMBV8  HEADER RECORD!!!!!!!")

# NAMESTR layout (TS-140), big-endian, 140 bytes of which we use the head
_NAMESTR_HEAD = struct.Struct(">hhhh8s40s8shhh2s8shhl")


def ibm_to_ieee(raw: bytes) -> float | None:
    """Decode one 8-byte IBM-format double; None means a missing value.

    Missing codes are a leading '.', 'A'-'Z' or '_' byte with all
    remaining bytes zero.  Everything else decodes via
    (-1)^sign * fraction/2^56 * 16^(exponent-64); fraction bits beyond
    IEEE double precision are truncated toward zero.
    """
    if len(raw) != 8:
        raise ValueError("ibm_to_ieee needs exactly 8 bytes")
    first = raw[0]
    if raw[1:] == b"\x00" * 7 and (
        first == 0x2E or 0x41 <= first <= 0x5A or first == 0x5F
    ):
        return None
    sign = -1.0 if first & 0x80 else 1.0
    exponent = first & 0x7F
    fraction = int.from_bytes(raw[1:], "big")
    if fraction == 0:
        return 0.0
    shift = 0
    while fraction >= (1 << 53):
        fraction >>= 1
        shift += 1
    return sign * math.ldexp(fraction, shift - 56 + 4 * (exponent - 64))


@dataclass(frozen=True)
class VariableDescriptor:
    name: str
    vtype: str  # 'numeric' | 'char'
    length: int
    position: int


@dataclass(frozen=True)
class XptFile:
    """Structural view of the first member: descriptors plus the raw
    observation payload (contract: sum of lengths == record stride)."""

    member_name: str
    variable_descriptors: tuple[VariableDescriptor, ...]
    observations: bytes


@dataclass(frozen=True)
class XptParseResult:
    dataset: Dataset
    member_name: str
    warnings: tuple[str, ...]


def _records(data: bytes) -> list[bytes]:
    if len(data) % RECORD_LEN:
        raise DataError(
            f"file length {len(data)} is not a multiple of {RECORD_LEN}-byte records"
        )
    return [data[i:i + RECORD_LEN] for i in range(0, len(data), RECORD_LEN)]


def read_structure(data: bytes) -> XptFile:
    """Validate the record framing and pull out the first member."""
    records = _records(data)
    if not records or not records[0].startswith(_LIBRARY_SIG):
        if records and records[0].startswith(_V8_SIGS[0]):
            raise DataError("XPORT v8/v9 files are not supported; need version 5")
        raise DataError("bad signature: not an XPORT v5 library header")

    idx = next(
        (i for i, r in enumerate(records) if r.startswith(_MEMBER_SIG)), None
    )
    if idx is None:
        if any(r.startswith(_V8_SIGS[1]) for r in records):
            raise DataError("XPORT v8/v9 member headers are not supported")
        raise DataError("no member header record found")
    try:
        namestr_size = int(records[idx][74:78])
    except ValueError as exc:
        raise DataError("unreadable NAMESTR size in member header") from exc
    if not records[idx + 1].startswith(_DSCRPTR_SIG):
        raise DataError("missing descriptor header record")
    member_name = records[idx + 2][8:16].decode("ascii", "replace").strip()

    ns_idx = idx + 4
    if not records[ns_idx].startswith(_NAMESTR_SIG):
        raise DataError("missing NAMESTR header record")
    try:
        n_vars = int(records[ns_idx][54:58])
    except ValueError as exc:
        raise DataError("unreadable variable count in NAMESTR header") from exc
    if n_vars < 1:
        raise DataError("member declares no variables")

    ns_bytes_needed = n_vars * namestr_size
    ns_records = -(-ns_bytes_needed // RECORD_LEN)  # ceil
    ns_blob = b"".join(records[ns_idx + 1: ns_idx + 1 + ns_records])
    if len(ns_blob) < ns_bytes_needed:
        raise DataError("truncated NAMESTR section")

    descriptors = []
    for v in range(n_vars):
        chunk = ns_blob[v * namestr_size: v * namestr_size + _NAMESTR_HEAD.size]
        (ntype, _nhfun, nlng, _nvar0, nname, _nlabel, _nform, _nfl, _nfd,
         _nfj, _fill, _niform, _nifl, _nifd, npos) = _NAMESTR_HEAD.unpack(chunk)
        if ntype not in (1, 2):
            raise DataError(f"variable {v + 1}: unknown type code {ntype}")
        descriptors.append(VariableDescriptor(
            name=nname.decode("ascii", "replace").strip(),
            vtype="numeric" if ntype == 1 else "char",
            length=nlng,
            position=npos,
        ))

    obs_idx = ns_idx + 1 + ns_records
    if obs_idx >= len(records) or not records[obs_idx].startswith(_OBS_SIG):
        raise DataError("missing observation header record")

    descriptors.sort(key=lambda d: d.position)
    stride = sum(d.length for d in descriptors)
    expected_pos = 0
    for d in descriptors:
        if d.position != expected_pos:
            raise DataError(
                f"descriptor/stride mismatch: variable {d.name!r} at byte "
                f"{d.position}, expected {expected_pos}"
            )
        expected_pos += d.length
    if stride <= 0:
        raise DataError("observation stride is zero")

    payload = b"".join(records[obs_idx + 1:])
    return XptFile(member_name, tuple(descriptors), payload)


def parse_xpt(data: bytes) -> XptParseResult:
    """Parse the first member of an XPORT v5 byte stream into a Dataset.

    Numeric variables become float columns with IBM missing codes masked;
    character variables become fully-missing columns and leave a warning.
    The final record's blank padding (and fully-blank trailing rows, which
    are padding when the stride divides 80) is ignored.
    """
    member = read_structure(data)
    stride = sum(d.length for d in member.variable_descriptors)
    payload = member.observations

    n_obs, remainder = divmod(len(payload), stride)
    if remainder and payload[n_obs * stride:].strip(b" "):
        raise DataError(
            f"truncated observation record: {remainder} stray bytes after "
            f"{n_obs} complete rows"
        )
    blank_row = b" " * stride
    while n_obs > 0 and payload[(n_obs - 1) * stride: n_obs * stride] == blank_row:
        n_obs -= 1

    warnings = []
    columns = []
    for d in member.variable_descriptors:
        values = np.zeros(n_obs, dtype=np.float64)
        mask = np.zeros(n_obs, dtype=bool)
        if d.vtype == "char":
            mask[:] = True
            warnings.append(
                f"character variable {d.name!r} kept as a fully-missing column"
            )
        else:
            if not 2 <= d.length <= 8:
                raise DataError(
                    f"numeric variable {d.name!r} has unsupported length {d.length}"
                )
            for t in range(n_obs):
                start = t * stride + d.position
                raw = payload[start: start + d.length].ljust(8, b"\x00")
                decoded = ibm_to_ieee(raw)
                if decoded is None:
                    mask[t] = True
                else:
                    values[t] = decoded
        columns.append(Column(d.name, values, mask))
    return XptParseResult(Dataset(tuple(columns)), member.member_name, tuple(warnings))


def parse_xpt_file(path: str | Path) -> XptParseResult:
    return parse_xpt(Path(path).read_bytes())


@dataclass(frozen=True)
class FetchOutcome:
    url: str
    path: Path | None
    skipped: bool = False
    error: str | None = None


@dataclass(frozen=True)
class FetchReport:
    outcomes: tuple[FetchOutcome, ...]

    @property
    def paths(self) -> list[Path]:
        """Local paths of successful fetches, in input order."""
        return [o.path for o in self.outcomes if o.path is not None]

    @property
    def errors(self) -> list[tuple[str, str]]:
        return [(o.url, o.error) for o in self.outcomes if o.error]


def _dest_name(url: str, index: int) -> str:
    tail = url.rstrip("/").rsplit("/", 1)[-1].split("?")[0]
    return tail or f"download_{index}"


def _remote_size(url: str, timeout: float) -> int | None:
    try:
        with urlopen(Request(url, method="HEAD"), timeout=timeout) as resp:
            size = resp.headers.get("Content-Length")
            return int(size) if size is not None else None
    except Exception:
        return None


def _fetch_one(url: str, dest: Path, timeout: float) -> FetchOutcome:
    size = _remote_size(url, timeout)
    if dest.exists() and size is not None and dest.stat().st_size == size:
        return FetchOutcome(url, dest, skipped=True)
    try:
        with urlopen(url, timeout=timeout) as resp:
            data = resp.read()
    except Exception as exc:
        return FetchOutcome(url, None, error=str(exc))
    tmp = dest.with_suffix(dest.suffix + ".part")
    tmp.write_bytes(data)
    tmp.replace(dest)
    return FetchOutcome(url, dest)


def fetch_files(
    url_list: list[str],
    dest_dir: str | Path,
    *,
    parallelism: int = 4,
    timeout: float = 60.0,
) -> FetchReport:
    """Download each URL into dest_dir, skipping files already present with
    an identical size.  Per-file failures are collected, never fatal for
    the remaining files.  Never called by the core library; CLI opt-in only.
    """
    dest_dir = Path(dest_dir)
    dest_dir.mkdir(parents=True, exist_ok=True)
    if not url_list:
        return FetchReport(())
    names = [_dest_name(u, i) for i, u in enumerate(url_list)]
    seen: dict[str, int] = {}
    for i, name in enumerate(names):
        if name in seen:
            names[i] = f"{i}_{name}"
        seen[name] = i
    targets = [dest_dir / name for name in names]
    workers = max(1, min(parallelism, len(url_list)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(
            lambda pair: _fetch_one(pair[0], pair[1], timeout),
            zip(url_list, targets),
        ))
    return FetchReport(tuple(outcomes))
