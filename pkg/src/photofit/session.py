"""Guided construction workflow: describe, pick candidates, assemble, tune.

One :class:`Session` tracks a single face being built.  Every mutating step
is appended to the session transcript, and because assembly and tuning are
deterministic functions of (selections, offsets, config), replaying that
transcript reproduces the stage images pixel for pixel.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from enum import Enum

from .assemble import (
    DEFAULT_CONSTANTS,
    Layout,
    LayoutConstants,
    compute_layout,
    find_ear_position,
    overlay_blind,
    overlay_masked,
)
from .blend import TuneConfig, ZeroCiPolicy, tune_masked
from .catalog import (
    COMPONENT_KINDS,
    Catalog,
    ComponentKind,
    ComponentRecord,
    Query,
    match_query,
    validate_params,
)
from .errors import (
    IllegalActionError,
    MissingKindError,
    NotACandidateError,
    OutOfBoundsError,
    StageNotReadyError,
    UnknownKindError,
    UnknownSessionError,
)
from .image import BinaryMask, GrayImage, binarize, otsu_threshold, save_pgm, write_intensity_text

STAGES = ("blind", "masked", "tuned")


class SessionStatus(str, Enum):
    DESCRIBING = "Describing"
    SELECTING = "Selecting"
    ASSEMBLED = "Assembled"
    TUNED = "Tuned"


@dataclass(eq=False)
class Session:
    """Mutable per-face state.  Mutations are serialized by ``lock``."""

    id: str
    status: SessionStatus = SessionStatus.DESCRIBING
    description: dict[ComponentKind, dict[str, str]] = field(default_factory=dict)
    warnings: dict[str, list[str]] = field(default_factory=dict)
    candidates: dict[ComponentKind, list[str]] = field(default_factory=dict)
    selections: dict[ComponentKind, str] = field(default_factory=dict)
    base_layout: Layout | None = None
    offsets: dict[ComponentKind, tuple[int, int]] = field(default_factory=dict)
    stages: dict[str, GrayImage] = field(default_factory=dict)
    tune_config: TuneConfig = field(default_factory=TuneConfig)
    transcript: list[dict] = field(default_factory=list)
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    def layout(self) -> Layout | None:
        """Computed placements with manual offsets applied on top."""
        if self.base_layout is None:
            return None
        return self.base_layout.shifted(self.offsets)


def session_snapshot(sess: Session) -> dict:
    """JSON-shaped view of a session (no pixel data)."""
    layout = sess.layout()
    placements = None
    anchor = None
    if layout is not None:
        anchor = {"row": layout.anchor.row, "col": layout.anchor.col}
        placements = {
            kind.value: {
                "top_row": p.top_row,
                "left_col": p.left_col,
                "height": p.height,
                "width": p.width,
            }
            for kind, p in layout.placements.items()
        }
    return {
        "id": sess.id,
        "status": sess.status.value,
        "description": {k.value: dict(v) for k, v in sess.description.items()},
        "warnings": {k: list(v) for k, v in sess.warnings.items()},
        "candidates": {k.value: list(v) for k, v in sess.candidates.items()},
        "selections": {k.value: v for k, v in sess.selections.items()},
        "anchor": anchor,
        "placements": placements,
        "offsets": {k.value: list(v) for k, v in sess.offsets.items()},
        "stages": [s for s in STAGES if s in sess.stages],
        "threshold": sess.tune_config.component_threshold,
    }


def _parse_kind(kind: ComponentKind | str) -> ComponentKind:
    if isinstance(kind, ComponentKind):
        return kind
    return ComponentKind.parse(str(kind))


def _record_mask(record: ComponentRecord) -> BinaryMask:
    if record.mask is not None:
        return record.mask
    return binarize(record.image, otsu_threshold(record.image))


class ConstructionService:
    """Catalog-backed session store implementing the whole workflow.

    Each session is single-writer: its lock serializes mutating calls.
    Distinct sessions never contend.  Layout constants are used as given
    (calibrated for 92x112 faces); pass ``LayoutConstants.scaled_for(...)``
    to opt into proportional rescaling for other canvases.
    """

    def __init__(
        self, catalog: Catalog, constants: LayoutConstants = DEFAULT_CONSTANTS
    ) -> None:
        self.catalog = catalog
        self.constants = constants
        self._sessions: dict[str, Session] = {}
        self._store_lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def create_session(self) -> Session:
        sess = Session(id=uuid.uuid4().hex[:12])
        sess.transcript.append({"op": "create"})
        with self._store_lock:
            self._sessions[sess.id] = sess
        return sess

    def get_session(self, session_id: str) -> Session:
        with self._store_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSessionError(f"no session {session_id!r}") from None

    def session_ids(self) -> list[str]:
        with self._store_lock:
            return list(self._sessions)

    # -- workflow steps ----------------------------------------------------

    def submit_description(
        self, session_id: str, description: dict[str, dict[str, str]]
    ) -> Session:
        """Store a full seven-kind description and retrieve candidates.

        Legal in every status: resubmitting is the reset path, clearing
        selections, offsets and stage images before dropping back to
        Selecting.  Out-of-vocabulary parameter names cannot constrain a
        query and are reported as warnings instead; unknown values pass
        through so records stored with them stay reachable.
        """
        sess = self.get_session(session_id)
        with sess.lock:
            parsed: dict[ComponentKind, dict[str, str]] = {}
            for name, params in description.items():
                parsed[_parse_kind(name)] = {str(k): str(v) for k, v in params.items()}
            missing = [k.value for k in ComponentKind if k not in parsed]
            if missing:
                raise MissingKindError(f"description missing kinds: {missing}")

            warnings: dict[str, list[str]] = {}
            candidates: dict[ComponentKind, list[str]] = {}
            for kind in ComponentKind:
                params = parsed[kind]
                report = validate_params(kind, params)
                warnings[kind.value] = report.warnings
                query = Query(
                    kind,
                    {n: v for n, v in params.items() if n not in report.unknown_names},
                )
                candidates[kind] = [r.id for r in match_query(query, self.catalog)]

            sess.description = parsed
            sess.warnings = warnings
            sess.candidates = candidates
            sess.selections = {}
            sess.base_layout = None
            sess.offsets = {}
            sess.stages = {}
            sess.status = SessionStatus.SELECTING
            sess.transcript.append(
                {"op": "describe", "description": {k.value: dict(v) for k, v in parsed.items()}}
            )
            return sess

    def select_candidate(
        self, session_id: str, kind: ComponentKind | str, record_id: str
    ) -> Session:
        sess = self.get_session(session_id)
        with sess.lock:
            kind = _parse_kind(kind)
            if sess.status is not SessionStatus.SELECTING:
                raise IllegalActionError(
                    f"cannot select while {sess.status.value}; resubmit the description first"
                )
            if record_id not in sess.candidates.get(kind, []):
                raise NotACandidateError(
                    f"{record_id!r} is not a candidate for {kind.value}"
                )
            sess.selections[kind] = record_id
            sess.transcript.append(
                {"op": "select", "kind": kind.value, "record_id": record_id}
            )
            return sess

    def assemble_session(self, session_id: str) -> Session:
        """Compute the layout from the chosen face cutting and paste stages.

        Needs all seven selections.  Re-assembling is idempotent; manual
        offsets survive and a tuned stage, if present, is recomputed.
        """
        sess = self.get_session(session_id)
        with sess.lock:
            missing = [k.value for k in ComponentKind if k not in sess.selections]
            if missing:
                raise MissingKindError(f"no selection yet for: {missing}")

            face_rec = self.catalog.get(sess.selections[ComponentKind.FACE_CUTTING])
            face = face_rec.image
            silhouette = _record_mask(face_rec)
            anchor = find_ear_position(silhouette)
            comps = {
                kind: self.catalog.get(sess.selections[kind])
                for kind in COMPONENT_KINDS
            }
            dims = {
                kind: (rec.image.height, rec.image.width)
                for kind, rec in comps.items()
            }
            base = compute_layout(anchor, dims, self.constants)
            layout = base.shifted(sess.offsets)

            stages = dict(_paste_stages(face, comps, layout))
            if sess.status is SessionStatus.TUNED:
                stages["tuned"] = _tune_stage(face, comps, layout, sess.tune_config)

            sess.base_layout = base
            sess.stages = stages
            if sess.status in (SessionStatus.DESCRIBING, SessionStatus.SELECTING):
                sess.status = SessionStatus.ASSEMBLED
            sess.transcript.append({"op": "assemble"})
            return sess

    def tune_session(
        self,
        session_id: str,
        threshold: int | None = None,
        zero_ci_policy: ZeroCiPolicy | None = None,
    ) -> Session:
        """Blend every component seam, always starting from the pristine face."""
        sess = self.get_session(session_id)
        with sess.lock:
            if sess.status not in (SessionStatus.ASSEMBLED, SessionStatus.TUNED):
                raise IllegalActionError(
                    f"cannot tune while {sess.status.value}; assemble first"
                )
            cfg = TuneConfig(
                component_threshold=(
                    sess.tune_config.component_threshold if threshold is None else threshold
                ),
                zero_ci_policy=zero_ci_policy or sess.tune_config.zero_ci_policy,
            )
            face_rec = self.catalog.get(sess.selections[ComponentKind.FACE_CUTTING])
            comps = {
                kind: self.catalog.get(sess.selections[kind])
                for kind in COMPONENT_KINDS
            }
            layout = sess.layout()
            assert layout is not None
            tuned = _tune_stage(face_rec.image, comps, layout, cfg)

            sess.tune_config = cfg
            sess.stages["tuned"] = tuned
            sess.status = SessionStatus.TUNED
            sess.transcript.append(
                {
                    "op": "tune",
                    "threshold": cfg.component_threshold,
                    "zero_ci_policy": cfg.zero_ci_policy.name,
                }
            )
            return sess

    def nudge_component(
        self, session_id: str, kind: ComponentKind | str, d_row: int, d_col: int
    ) -> Session:
        """Shift one component's placement and recompute every stage.

        A shift that would push any pixel of the rectangle off the canvas
        raises without touching the session.
        """
        sess = self.get_session(session_id)
        with sess.lock:
            kind = _parse_kind(kind)
            if kind is ComponentKind.FACE_CUTTING:
                raise UnknownKindError("the face cutting has no placement to nudge")
            if sess.status not in (SessionStatus.ASSEMBLED, SessionStatus.TUNED):
                raise IllegalActionError(
                    f"cannot nudge while {sess.status.value}; assemble first"
                )
            assert sess.base_layout is not None

            face_rec = self.catalog.get(sess.selections[ComponentKind.FACE_CUTTING])
            face = face_rec.image
            old = sess.offsets.get(kind, (0, 0))
            trial_offsets = dict(sess.offsets)
            trial_offsets[kind] = (old[0] + d_row, old[1] + d_col)
            layout = sess.base_layout.shifted(trial_offsets)
            bad = layout.placements[kind]
            if not bad.fits(face.height, face.width):
                raise OutOfBoundsError(
                    f"{kind.value} would land at ({bad.top_row},{bad.left_col}), "
                    f"leaving the {face.width}x{face.height} canvas"
                )

            comps = {
                k: self.catalog.get(sess.selections[k]) for k in COMPONENT_KINDS
            }
            stages = dict(_paste_stages(face, comps, layout))
            if sess.status is SessionStatus.TUNED:
                stages["tuned"] = _tune_stage(face, comps, layout, sess.tune_config)

            sess.offsets = trial_offsets
            sess.stages = stages
            sess.transcript.append(
                {"op": "nudge", "kind": kind.value, "d_row": d_row, "d_col": d_col}
            )
            return sess

    def export_face(self, session_id: str, stage: str, fmt: str = "pgm") -> bytes:
        """Serialize one computed stage image; ``fmt`` is ``pgm`` or ``text``."""
        sess = self.get_session(session_id)
        with sess.lock:
            if stage not in STAGES:
                raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
            if stage not in sess.stages:
                raise StageNotReadyError(f"stage {stage!r} has not been computed")
            img = sess.stages[stage]
        if fmt == "pgm":
            return save_pgm(img)
        if fmt == "text":
            return write_intensity_text(img).encode("ascii")
        raise ValueError(f"unknown export format {fmt!r}")

    # -- replay ------------------------------------------------------------

    def replay_transcript(self, transcript: list[dict]) -> Session:
        """Re-run a recorded action log in a fresh session."""
        sess = self.create_session()
        for event in transcript:
            op = event.get("op")
            if op == "create":
                continue
            if op == "describe":
                self.submit_description(sess.id, event["description"])
            elif op == "select":
                self.select_candidate(sess.id, event["kind"], event["record_id"])
            elif op == "assemble":
                self.assemble_session(sess.id)
            elif op == "tune":
                policy = ZeroCiPolicy[event.get("zero_ci_policy", "LEAVE_FACE")]
                self.tune_session(sess.id, event.get("threshold"), policy)
            elif op == "nudge":
                self.nudge_component(
                    sess.id, event["kind"], event["d_row"], event["d_col"]
                )
            else:
                raise ValueError(f"transcript contains unknown op {op!r}")
        return self.get_session(sess.id)


def _paste_stages(
    face: GrayImage,
    comps: dict[ComponentKind, ComponentRecord],
    layout: Layout,
) -> dict[str, GrayImage]:
    blind = face
    masked = face
    for kind in COMPONENT_KINDS:
        rec = comps[kind]
        p = layout.placements[kind]
        blind = overlay_blind(blind, rec.image, p)
        masked = overlay_masked(masked, rec.image, _record_mask(rec), p)
    return {"blind": blind, "masked": masked}


def _tune_stage(
    face: GrayImage,
    comps: dict[ComponentKind, ComponentRecord],
    layout: Layout,
    cfg: TuneConfig,
) -> GrayImage:
    out = face
    for kind in COMPONENT_KINDS:
        rec = comps[kind]
        out = tune_masked(out, rec.image, _record_mask(rec), layout.placements[kind], cfg)
    return out
