"""Facial component storage, parameter vocabulary, and wildcard retrieval.

A catalog is an ordered collection of :class:`ComponentRecord`.  Each record
carries a descriptive parameter map drawn from a fixed per-kind vocabulary;
queries filter on those parameters, with ``CantSay`` (or an omitted name)
acting as a wildcard.  Catalogs persist as a tab-separated manifest plus one
canonical PGM per image and mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import (
    CorruptManifestError,
    CatalogIoError,
    DimensionMismatchError,
    UnknownKindError,
)
from .image import BinaryMask, GrayImage, binarize, load_pgm, otsu_threshold, save_pgm

CANT_SAY = "CantSay"


class ComponentKind(str, Enum):
    FACE_CUTTING = "FaceCutting"
    RIGHT_EYEBROW = "RightEyebrow"
    RIGHT_EYE = "RightEye"
    LEFT_EYEBROW = "LeftEyebrow"
    LEFT_EYE = "LeftEye"
    NOSE = "Nose"
    LIP = "Lip"

    @classmethod
    def parse(cls, name: str) -> "ComponentKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise UnknownKindError(f"unknown component kind {name!r}")


#: Kinds that get composited onto a face cutting, in overlay order.
COMPONENT_KINDS = tuple(k for k in ComponentKind if k is not ComponentKind.FACE_CUTTING)

_EYEBROW_PARAMS = {
    "Length": ("Small", "Large", "Normal", CANT_SAY),
    "Width": ("Small", "Large", "Normal", CANT_SAY),
    "Shape": ("Flat", "Round", "Wavy", "Artistic", CANT_SAY),
    "Hair": ("HighlyDense", "LowDense", "Normal", CANT_SAY),
}
_EYE_PARAMS = {
    "Length": ("Small", "Large", "Normal", CANT_SAY),
    "Width": ("Small", "Large", "Normal", CANT_SAY),
    "Shape": ("Round", "Elliptic", CANT_SAY),
}

#: Per-kind parameter vocabulary.  Values are stored verbatim; anything
#: outside this vocabulary is accepted with a warning (see validate_params).
PARAMETER_SCHEMA: dict[ComponentKind, dict[str, tuple[str, ...]]] = {
    ComponentKind.FACE_CUTTING: {
        "Sex": ("Male", "Female"),
        "Shape": ("Oval", "Round", CANT_SAY),
        "HairDensity": ("HighlyDense", "LowDense", "Normal", CANT_SAY),
    },
    ComponentKind.RIGHT_EYEBROW: dict(_EYEBROW_PARAMS),
    ComponentKind.LEFT_EYEBROW: dict(_EYEBROW_PARAMS),
    ComponentKind.RIGHT_EYE: dict(_EYE_PARAMS),
    ComponentKind.LEFT_EYE: dict(_EYE_PARAMS),
    ComponentKind.NOSE: {
        "Sharpness": ("Sharp", "Blunt", "Normal", CANT_SAY),
        "Length": ("Small", "Large", "Normal", CANT_SAY),
        "Width": ("Small", "Large", "Normal", CANT_SAY),
    },
    ComponentKind.LIP: {
        "Length": ("Wide", "Small", "Normal", CANT_SAY),
        "Width": ("Thick", "Thin", "Normal", CANT_SAY),
        "Shape": ("Linear", "Wavy", CANT_SAY),
    },
}


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a parameter map against a kind's vocabulary.

    Warnings never block storage: the vocabulary is descriptive, and real
    descriptions occasionally use values outside it.
    """

    kind: ComponentKind
    unknown_names: tuple[str, ...] = ()
    unknown_values: tuple[tuple[str, str], ...] = ()

    @property
    def warnings(self) -> list[str]:
        out = [f"unknown parameter {name!r}" for name in self.unknown_names]
        out += [
            f"value {value!r} not in the {self.kind.value} vocabulary for {name!r}"
            for name, value in self.unknown_values
        ]
        return out

    @property
    def clean(self) -> bool:
        return not self.unknown_names and not self.unknown_values


def validate_params(kind: ComponentKind, params: dict[str, str]) -> ValidationReport:
    """Report unknown parameter names and out-of-vocabulary values."""
    if not isinstance(kind, ComponentKind):
        kind = ComponentKind.parse(str(kind))
    schema = PARAMETER_SCHEMA[kind]
    unknown_names = tuple(name for name in params if name not in schema)
    unknown_values = tuple(
        (name, value)
        for name, value in params.items()
        if name in schema and value not in schema[name]
    )
    return ValidationReport(kind, unknown_names, unknown_values)


@dataclass(frozen=True)
class ComponentRecord:
    id: str
    kind: ComponentKind
    params: dict[str, str]
    image: GrayImage
    mask: BinaryMask | None
    source: str = ""


@dataclass(frozen=True)
class Query:
    """Parameter constraints for one kind.

    Omitted names and ``CantSay`` values match anything.  Names must come
    from the kind's vocabulary; values are free-form (stored records may
    carry out-of-vocabulary values, and those must stay reachable).
    """

    kind: ComponentKind
    desired: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        schema = PARAMETER_SCHEMA[self.kind]
        bad = [name for name in self.desired if name not in schema]
        if bad:
            raise ValueError(
                f"query names {bad} are not parameters of {self.kind.value}"
            )

    def constraints(self) -> dict[str, str]:
        """The non-wildcard part of the query."""
        return {n: v for n, v in self.desired.items() if v != CANT_SAY}

    def matches(self, record: ComponentRecord) -> bool:
        if record.kind is not self.kind:
            return False
        return all(record.params.get(n) == v for n, v in self.constraints().items())


def match_query(query: Query, catalog: "Catalog") -> list[ComponentRecord]:
    """Records satisfying every non-wildcard constraint.

    Ordered by descending count of exactly-matched non-wildcard parameters,
    then by id, so results are stable across runs.
    """
    constraints = query.constraints()
    matched = [r for r in catalog.records(query.kind) if query.matches(r)]

    def sort_key(record: ComponentRecord):
        hits = sum(1 for n, v in constraints.items() if record.params.get(n) == v)
        return (-hits, record.id)

    return sorted(matched, key=sort_key)


_MANIFEST_NAME = "manifest.tsv"


class Catalog:
    """Ordered id -> record store with disk persistence.

    Reads are safe to share; mutation goes through :meth:`ingest` on a single
    writer.
    """

    def __init__(self) -> None:
        self._records: dict[str, ComponentRecord] = {}

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._records

    def get(self, record_id: str) -> ComponentRecord:
        try:
            return self._records[record_id]
        except KeyError:
            raise KeyError(f"no record with id {record_id!r}") from None

    def records(self, kind: ComponentKind | None = None) -> list[ComponentRecord]:
        if kind is None:
            return list(self._records.values())
        return [r for r in self._records.values() if r.kind is kind]

    def observed_values(self, kind: ComponentKind, name: str) -> list[str]:
        """Distinct stored values for one parameter, in first-seen order."""
        seen: dict[str, None] = {}
        for record in self.records(kind):
            if name in record.params:
                seen.setdefault(record.params[name], None)
        return list(seen)

    def _next_id(self, kind: ComponentKind) -> str:
        prefix = kind.value.lower()
        n = sum(1 for rid in self._records if rid.startswith(prefix + "-"))
        while True:
            n += 1
            candidate = f"{prefix}-{n:04d}"
            if candidate not in self._records:
                return candidate

    def ingest(
        self,
        kind: ComponentKind,
        params: dict[str, str],
        image: GrayImage,
        mask: BinaryMask | None = None,
        source: str = "",
        record_id: str | None = None,
    ) -> ComponentRecord:
        """Store a component; returns the persisted record.

        Non-face-cutting components without a mask get one derived by Otsu
        binarization of their own image.  Face cuttings may stay maskless
        (the whole image is used).
        """
        if not isinstance(kind, ComponentKind):
            kind = ComponentKind.parse(str(kind))
        if mask is not None and mask.shape != image.shape:
            raise DimensionMismatchError(
                f"mask {mask.width}x{mask.height} vs image {image.width}x{image.height}"
            )
        if mask is None and kind is not ComponentKind.FACE_CUTTING:
            mask = binarize(image, otsu_threshold(image))
        for text, label in ((source, "source"), (record_id or "", "id")):
            if "\t" in text or "\n" in text:
                raise ValueError(f"{label} must not contain tabs or newlines")
        if record_id is None:
            record_id = self._next_id(kind)
        elif record_id in self._records:
            raise ValueError(f"duplicate record id {record_id!r}")
        record = ComponentRecord(record_id, kind, dict(params), image, mask, source)
        self._records[record_id] = record
        return record


def save_catalog(catalog: Catalog, root) -> None:
    """Write manifest.tsv plus one canonical PGM per image/mask under root."""
    root = Path(root)
    try:
        root.mkdir(parents=True, exist_ok=True)
        lines = []
        for record in catalog.records():
            image_file = f"{record.id}.pgm"
            (root / image_file).write_bytes(save_pgm(record.image))
            if record.mask is not None:
                mask_file = f"{record.id}.mask.pgm"
                (root / mask_file).write_bytes(
                    save_pgm(GrayImage(record.mask.bits))
                )
            else:
                mask_file = "-"
            fields = [record.id, record.kind.value, image_file, mask_file, record.source]
            fields += [f"{n}={v}" for n, v in record.params.items()]
            lines.append("\t".join(fields))
        (root / _MANIFEST_NAME).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")
    except OSError as exc:
        raise CatalogIoError(f"cannot write catalog under {root}: {exc}") from exc


def load_catalog(root) -> Catalog:
    """Inverse of :func:`save_catalog`; bit-exact on images and params."""
    root = Path(root)
    manifest = root / _MANIFEST_NAME
    try:
        text = manifest.read_text("utf-8")
    except OSError as exc:
        raise CatalogIoError(f"cannot read {manifest}: {exc}") from exc

    catalog = Catalog()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 5:
            raise CorruptManifestError(f"expected at least 5 fields, got {len(fields)}", lineno)
        record_id, kind_name, image_file, mask_file, source = fields[:5]
        try:
            kind = ComponentKind.parse(kind_name)
        except UnknownKindError as exc:
            raise CorruptManifestError(str(exc), lineno) from None
        params: dict[str, str] = {}
        for pair in fields[5:]:
            name, sep, value = pair.partition("=")
            if not sep:
                raise CorruptManifestError(f"bad parameter field {pair!r}", lineno)
            params[name] = value
        try:
            image = load_pgm((root / image_file).read_bytes())
        except OSError as exc:
            raise CorruptManifestError(f"missing image file {image_file}: {exc}", lineno) from None
        mask = None
        if mask_file != "-":
            try:
                mask_img = load_pgm((root / mask_file).read_bytes())
                mask = BinaryMask(mask_img.pixels)
            except OSError as exc:
                raise CorruptManifestError(f"missing mask file {mask_file}: {exc}", lineno) from None
            except ValueError as exc:
                raise CorruptManifestError(f"mask file {mask_file} is not 0/1: {exc}", lineno) from None
        if record_id in catalog:
            raise CorruptManifestError(f"duplicate id {record_id!r}", lineno)
        catalog.ingest(kind, params, image, mask, source, record_id=record_id)
    return catalog
