"""Line-oriented record files.

A record is a header ``%DTMS v1 <type>`` followed by ``key = value``
lines.  Integers are canonical lowercase hex, lists are comma separated,
messages are hex-encoded bytes.  Secrets held by the dealer have no
record type and cannot be written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .combiner import GroupSignature
from .dealer import DealerPublicBoard, MemberRecord
from .errors import FileFormatError
from .group import GroupParams, HashMode, KeyPair, decode_int, encode_int
from .receiver import ConfirmationPackage, ZkTranscript
from .signing import PartialSignature

__all__ = [
    "Record",
    "RECORD_TYPES",
    "emit",
    "parse",
    "read_record",
    "write_record",
    "params_to_record",
    "params_from_record",
    "keypair_to_record",
    "keypair_from_record",
    "board_to_record",
    "board_from_record",
    "partial_to_record",
    "partial_from_record",
    "signature_to_record",
    "signature_from_record",
    "package_to_record",
    "package_from_record",
    "transcript_to_record",
    "transcript_from_record",
]

HEADER = "%DTMS v1"
RECORD_TYPES = ("params", "keypair", "board", "partial", "sig", "package", "transcript")
_KEY = re.compile(r"[a-z][a-z0-9_.]*\Z")


@dataclass
class Record:
    kind: str
    fields: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> str:
        try:
            return self.fields[key]
        except KeyError:
            raise FileFormatError(f"{self.kind} record is missing field {key!r}") from None

    def int(self, key: str) -> int:
        try:
            return decode_int(self[key])
        except ValueError as exc:
            raise FileFormatError(f"field {key!r}: {exc}") from None

    def ints(self, key: str) -> list[int]:
        raw = self[key]
        if not raw:
            return []
        try:
            return [decode_int(item) for item in raw.split(",")]
        except ValueError as exc:
            raise FileFormatError(f"field {key!r}: {exc}") from None

    def bytes(self, key: str) -> bytes:
        try:
            return bytes.fromhex(self[key])
        except ValueError:
            raise FileFormatError(f"field {key!r} is not hex-encoded bytes") from None


def emit(record: Record) -> str:
    if record.kind not in RECORD_TYPES:
        raise FileFormatError(f"unknown record type {record.kind!r}")
    lines = [f"{HEADER} {record.kind}"]
    for key, value in record.fields.items():
        if not _KEY.match(key) or "\n" in value:
            raise FileFormatError(f"cannot emit field {key!r}")
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Record:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER + " "):
        raise FileFormatError(f"missing {HEADER!r} header")
    kind = lines[0][len(HEADER) + 1:].strip()
    if kind not in RECORD_TYPES:
        raise FileFormatError(f"unknown record type {kind!r}")
    record = Record(kind)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not _KEY.match(key):
            raise FileFormatError(f"line {lineno}: expected 'key = value'")
        if key in record.fields:
            raise FileFormatError(f"line {lineno}: duplicate key {key!r}")
        record.fields[key] = value
    return record


def read_record(path, kind: str | None = None) -> Record:
    try:
        record = parse(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None
    if kind is not None and record.kind != kind:
        raise FileFormatError(f"{path}: expected a {kind} record, found {record.kind}")
    return record


def write_record(path, record: Record) -> None:
    Path(path).write_text(emit(record), encoding="utf-8")


def _hexlist(values) -> str:
    return ",".join(encode_int(v) for v in values)


def params_to_record(params: GroupParams) -> Record:
    return Record("params", {
        "p": encode_int(params.p),
        "q": encode_int(params.q),
        "g": encode_int(params.g),
        "hash": params.hash_mode.descriptor(),
    })


def _params_fields(rec: Record) -> GroupParams:
    try:
        mode = HashMode.from_descriptor(rec["hash"])
    except ValueError as exc:
        raise FileFormatError(str(exc)) from None
    return GroupParams(rec.int("p"), rec.int("q"), rec.int("g"), mode)


def params_from_record(rec: Record) -> GroupParams:
    _expect(rec, "params")
    return _params_fields(rec)


def keypair_to_record(kp: KeyPair, uid: int | None = None) -> Record:
    fields = {} if uid is None else {"uid": encode_int(uid)}
    fields.update(x=encode_int(kp.x), y=encode_int(kp.y))
    return Record("keypair", fields)


def keypair_from_record(rec: Record) -> tuple[KeyPair, int | None]:
    _expect(rec, "keypair")
    uid = rec.int("uid") if "uid" in rec.fields else None
    return KeyPair(rec.int("x"), rec.int("y")), uid


def board_to_record(board: DealerPublicBoard) -> Record:
    fields = params_to_record(board.params).fields
    fields.update({
        "y_s": encode_int(board.y_s),
        "w": encode_int(board.w),
        "t": encode_int(board.t),
        "n": encode_int(board.n),
    })
    for index, rec in enumerate(board.members, start=1):
        fields[f"member.{index}"] = _hexlist((rec.uid, rec.y, rec.m, rec.n, rec.v))
    return Record("board", fields)


def board_from_record(rec: Record) -> DealerPublicBoard:
    _expect(rec, "board")
    n = rec.int("n")
    members = []
    for index in range(1, n + 1):
        values = rec.ints(f"member.{index}")
        if len(values) != 5:
            raise FileFormatError(f"member.{index} needs uid,y,m,n,v")
        members.append(MemberRecord(*values))
    extra = [k for k in rec.fields if k.startswith("member.") and not 1 <= _suffix(k) <= n]
    if extra:
        raise FileFormatError(f"member entries beyond n={n}: {extra}")
    return DealerPublicBoard(_params_fields(rec), rec.int("y_s"), rec.int("w"), rec.int("t"), tuple(members))


def _suffix(key: str) -> int:
    try:
        return int(key.split(".", 1)[1])
    except ValueError:
        return -1


def partial_to_record(ps: PartialSignature, session=None) -> Record:
    """``session`` optionally carries the broadcast context ``(a, c, signers, message)``."""
    fields = {"uid": encode_int(ps.uid), "s": encode_int(ps.s), "b": encode_int(ps.b), "rs": encode_int(ps.r_s)}
    if session is not None:
        a, c, signers, message = session
        fields.update(a=encode_int(a), c=encode_int(c), signers=_hexlist(signers), msg=bytes(message).hex())
    return Record("partial", fields)


def partial_from_record(rec: Record):
    _expect(rec, "partial")
    ps = PartialSignature(rec.int("uid"), rec.int("s"), rec.int("b"), rec.int("rs"))
    session = None
    if "a" in rec.fields:
        session = (rec.int("a"), rec.int("c"), tuple(rec.ints("signers")), rec.bytes("msg"))
    return ps, session


def signature_to_record(sig: GroupSignature) -> Record:
    return Record("sig", {
        "ss": encode_int(sig.s_s),
        "us": encode_int(sig.u_s),
        "ws": encode_int(sig.w_s),
        "signers": _hexlist(sig.signers),
        "msg": sig.message.hex(),
    })


def signature_from_record(rec: Record) -> GroupSignature:
    _expect(rec, "sig")
    return GroupSignature(rec.int("ss"), rec.int("us"), rec.int("ws"), rec.bytes("msg"), tuple(rec.ints("signers")))


def package_to_record(pkg: ConfirmationPackage) -> Record:
    return Record("package", {
        "rr": encode_int(pkg.r_r),
        "e": encode_int(pkg.e),
        "ss": encode_int(pkg.s_s),
        "us": encode_int(pkg.u_s),
        "msg": pkg.message.hex(),
        "mu": encode_int(pkg.mu),
    })


def package_from_record(rec: Record) -> ConfirmationPackage:
    _expect(rec, "package")
    return ConfirmationPackage(rec.int("rr"), rec.int("e"), rec.int("ss"), rec.int("us"), rec.bytes("msg"), rec.int("mu"))


def transcript_to_record(tr: ZkTranscript) -> Record:
    fields = {}
    for index, (role, name, value) in enumerate(tr.moves(), start=1):
        fields[f"move.{index}"] = f"{role},{name},{encode_int(value)}"
    fields["verdict"] = tr.verdict if tr.failed is None else f"{tr.verdict},{tr.failed}"
    return Record("transcript", fields)


def transcript_from_record(rec: Record) -> ZkTranscript:
    _expect(rec, "transcript")
    tr = ZkTranscript()
    names = {"w", "beta", "gamma", "u", "v", "alpha"}
    for key, value in rec.fields.items():
        if key == "verdict":
            continue
        if not key.startswith("move."):
            raise FileFormatError(f"unexpected transcript field {key!r}")
        parts = value.split(",")
        if len(parts) != 3 or parts[1] not in names:
            raise FileFormatError(f"bad move line {key!r}")
        try:
            setattr(tr, parts[1], decode_int(parts[2]))
        except ValueError as exc:
            raise FileFormatError(str(exc)) from None
    verdict, _, failed = rec["verdict"].partition(",")
    tr.verdict, tr.failed = verdict, failed or None
    return tr


def _expect(rec: Record, kind: str):
    if rec.kind != kind:
        raise FileFormatError(f"expected a {kind} record, found {rec.kind}")
