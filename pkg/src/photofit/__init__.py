"""Facial composite construction toolkit.

Components described by parameter maps are retrieved from a catalog,
pasted onto a face cutting at ear-anchored positions, and their seams
blended with a 3x3 intensity-factor kernel.  A streaming integer datapath
mirrors the floating-point blend to within one intensity level.
"""

from .assemble import (
    CALIBRATED_CANVAS,
    DEFAULT_CONSTANTS,
    AnchorPoint,
    Layout,
    LayoutConstants,
    Placement,
    build_component_sheet,
    compute_layout,
    find_ear_position,
    overlay_blind,
    overlay_masked,
)
from .blend import (
    BlendTerms,
    TuneConfig,
    ZeroCiPolicy,
    blend_pixel,
    commit_intensity,
    mask_seam_pairs,
    neighborhood_sum,
    placement_seam_pairs,
    seam_contrast,
    tune_masked,
    tune_overlay,
)
from .catalog import (
    CANT_SAY,
    COMPONENT_KINDS,
    PARAMETER_SCHEMA,
    Catalog,
    ComponentKind,
    ComponentRecord,
    Query,
    ValidationReport,
    load_catalog,
    match_query,
    save_catalog,
    validate_params,
)
from .datapath import (
    DatapathTrace,
    EquivalenceReport,
    PixelTrace,
    blend_pixel_int,
    equivalence_report,
    run_textfile_flow,
    stream_tune,
)
from .errors import PhotofitError
from .image import (
    BinaryMask,
    GrayImage,
    binarize,
    load_pgm,
    otsu_threshold,
    read_intensity_text,
    resize_nearest,
    save_pgm,
    write_intensity_text,
)
from .session import ConstructionService, Session, SessionStatus, session_snapshot

__version__ = "0.1.0"

__all__ = [
    "AnchorPoint",
    "BinaryMask",
    "BlendTerms",
    "CALIBRATED_CANVAS",
    "CANT_SAY",
    "COMPONENT_KINDS",
    "Catalog",
    "ComponentKind",
    "ComponentRecord",
    "ConstructionService",
    "DEFAULT_CONSTANTS",
    "DatapathTrace",
    "EquivalenceReport",
    "GrayImage",
    "Layout",
    "LayoutConstants",
    "PARAMETER_SCHEMA",
    "PhotofitError",
    "PixelTrace",
    "Placement",
    "Query",
    "Session",
    "SessionStatus",
    "TuneConfig",
    "ValidationReport",
    "ZeroCiPolicy",
    "binarize",
    "blend_pixel",
    "blend_pixel_int",
    "build_component_sheet",
    "commit_intensity",
    "compute_layout",
    "equivalence_report",
    "find_ear_position",
    "load_catalog",
    "load_pgm",
    "mask_seam_pairs",
    "match_query",
    "neighborhood_sum",
    "otsu_threshold",
    "overlay_blind",
    "overlay_masked",
    "placement_seam_pairs",
    "read_intensity_text",
    "resize_nearest",
    "run_textfile_flow",
    "save_catalog",
    "save_pgm",
    "seam_contrast",
    "session_snapshot",
    "stream_tune",
    "tune_masked",
    "tune_overlay",
    "validate_params",
    "write_intensity_text",
]
