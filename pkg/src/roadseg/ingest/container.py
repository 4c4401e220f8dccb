"""
Binary patch container.

Layout, all integers little-endian:

    magic       4 bytes  b"RSPC"
    version     uint16
    header_len  uint32
    header      UTF-8 JSON array of {name, shape, dtype, offset}
    payload     tensors in row-major order, offsets relative to payload

Element types are "f32" (IEEE-754 binary32) and "u8".
"""
import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple, Union

import numpy as np

from roadseg.core.errors import CorruptFileError, InvalidArgumentError

logger = logging.getLogger(__name__)

MAGIC = b"RSPC"
VERSION = 1
_PREFIX = struct.Struct("<4sHI")

DTYPES: Dict[str, np.dtype] = {
    "f32": np.dtype("<f4"),
    "u8": np.dtype("u1"),
}

PathLike = Union[str, Path]


@dataclass(frozen=True)
class TensorEntry:
    """Header record describing one tensor of the payload."""
    name: str
    shape: Tuple[int, ...]
    dtype: str
    offset: int

    @property
    def nbytes(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64)) * DTYPES[
            self.dtype
        ].itemsize

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "shape": list(self.shape),
            "dtype": self.dtype,
            "offset": self.offset,
        }


@dataclass
class PatchContainer:
    """Decoded container: header entries plus the tensors they describe."""
    version: int = VERSION
    entries: List[TensorEntry] = field(default_factory=list)
    tensors: Dict[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def json(self, name: str) -> Any:
        """Decode a u8 tensor holding UTF-8 JSON text."""
        return tensor_to_json(self.tensors[name])


def _dtype_code(array: np.ndarray) -> str:
    if array.dtype == np.float32:
        return "f32"
    if array.dtype == np.uint8:
        return "u8"
    raise InvalidArgumentError(
        f"Unsupported element type {array.dtype}; use float32 or uint8"
    )


def json_to_tensor(obj: Any) -> np.ndarray:
    """Serialize a JSON-compatible object into a u8 tensor."""
    return np.frombuffer(json.dumps(obj).encode("utf-8"), dtype=np.uint8)


def tensor_to_json(tensor: np.ndarray) -> Any:
    """Inverse of json_to_tensor."""
    return json.loads(np.asarray(tensor, dtype=np.uint8).tobytes())


def encode_container(tensors: Mapping[str, np.ndarray]) -> bytes:
    """
    Serialize named tensors into container bytes.

    Raises:
        InvalidArgumentError: For unsupported element types.
    """
    entries = []
    chunks = []
    offset = 0
    for name, array in tensors.items():
        array = np.asarray(array)
        code = _dtype_code(array)
        data = np.ascontiguousarray(array, dtype=DTYPES[code]).tobytes()
        entries.append(
            TensorEntry(name, tuple(int(s) for s in array.shape), code, offset)
        )
        chunks.append(data)
        offset += len(data)
    header = json.dumps([entry.to_dict() for entry in entries]).encode("utf-8")
    return b"".join(
        [_PREFIX.pack(MAGIC, VERSION, len(header)), header, *chunks]
    )


def decode_container(data: bytes) -> PatchContainer:
    """
    Parse and validate container bytes.

    Raises:
        CorruptFileError: Naming the failing check.
    """
    if len(data) < len(MAGIC) or data[: len(MAGIC)] != MAGIC:
        raise CorruptFileError("magic", "not a patch container")
    if len(data) < _PREFIX.size:
        raise CorruptFileError("header", "truncated file prefix")
    _, version, header_len = _PREFIX.unpack_from(data)
    if version != VERSION:
        raise CorruptFileError("version", f"unsupported version {version}")
    payload_start = _PREFIX.size + header_len
    if payload_start > len(data):
        raise CorruptFileError("header", "header extends past end of file")
    try:
        raw_entries = json.loads(data[_PREFIX.size:payload_start])
        entries = [
            TensorEntry(
                str(item["name"]),
                tuple(int(s) for s in item["shape"]),
                str(item["dtype"]),
                int(item["offset"]),
            )
            for item in raw_entries
        ]
    except (ValueError, KeyError, TypeError) as e:
        raise CorruptFileError("header", f"malformed header: {str(e)}")

    names = [entry.name for entry in entries]
    if len(set(names)) != len(names):
        raise CorruptFileError("names", "duplicate tensor names")

    payload = memoryview(data)[payload_start:]
    tensors = {}
    for entry in entries:
        if entry.dtype not in DTYPES:
            raise CorruptFileError(
                "header", f"unknown element type '{entry.dtype}'"
            )
        if entry.offset < 0 or any(s < 0 for s in entry.shape):
            raise CorruptFileError("header", f"invalid entry '{entry.name}'")
        end = entry.offset + entry.nbytes
        if end > len(payload):
            raise CorruptFileError(
                "payload", f"tensor '{entry.name}' is truncated"
            )
        tensors[entry.name] = (
            np.frombuffer(
                payload[entry.offset:end], dtype=DTYPES[entry.dtype]
            )
            .reshape(entry.shape)
            .copy()
        )
    return PatchContainer(version, entries, tensors)


def write_container(
    path: PathLike, tensors: Mapping[str, np.ndarray]
) -> PatchContainer:
    """Write named tensors to a container file and return its header."""
    data = encode_container(tensors)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    logger.debug("Wrote %d tensors to %s", len(tensors), path)
    return decode_container(data)


def read_container(path: PathLike) -> PatchContainer:
    """Read and validate a container file."""
    return decode_container(Path(path).read_bytes())
