"""Synthetic demo images and a seeded catalog.

Stands in for a real face database: a flat-intensity head silhouette on a
black background (so binarization and the ear scan behave), plus flat
elliptical components whose masks mark an inscribed ellipse as foreground.
Deterministic by construction; tests and the demo CLI both build on it.
"""

from __future__ import annotations

import numpy as np

from .catalog import CANT_SAY, Catalog, ComponentKind
from .image import BinaryMask, GrayImage

FACE_W, FACE_H = 92, 112
FACE_VALUE = 120
COMPONENT_VALUE = 200

#: (height, width) of each synthetic component image.
COMPONENT_DIMS: dict[ComponentKind, tuple[int, int]] = {
    ComponentKind.RIGHT_EYEBROW: (5, 20),
    ComponentKind.RIGHT_EYE: (8, 12),
    ComponentKind.LEFT_EYEBROW: (5, 20),
    ComponentKind.LEFT_EYE: (8, 12),
    ComponentKind.NOSE: (30, 15),
    ComponentKind.LIP: (10, 18),
}


def flat_image(h: int, w: int, value: int) -> GrayImage:
    return GrayImage(np.full((h, w), value, dtype=np.uint8))


def elliptical_mask(h: int, w: int) -> BinaryMask:
    """Inscribed ellipse as foreground (0), everything else background (1)."""
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    ry = max(cy, 0.5)
    rx = max(cx, 0.5)
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    inside = ((rows - cy) / ry) ** 2 + ((cols - cx) / rx) ** 2 <= 1.0
    return BinaryMask(np.where(inside, 0, 1).astype(np.uint8))


def synthetic_component(kind: ComponentKind, value: int = COMPONENT_VALUE):
    """Flat component image plus its elliptical foreground mask."""
    h, w = COMPONENT_DIMS[kind]
    return flat_image(h, w, value), elliptical_mask(h, w)


def synthetic_face_cutting(
    w: int = FACE_W, h: int = FACE_H, value: int = FACE_VALUE
) -> GrayImage:
    """Flat head ellipse on black; its leftmost pixel plays the ear corner."""
    canvas = np.zeros((h, w), dtype=np.uint8)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    ry, rx = h * 0.43, w * 0.41
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    inside = ((rows - cy) / ry) ** 2 + ((cols - cx) / rx) ** 2 <= 1.0
    canvas[inside] = value
    return GrayImage(canvas)


#: The worked retrieval example: one full face description, query-ready.
#: RightEyebrow/LeftEyebrow Shape is deliberately outside the eyebrow
#: vocabulary; the catalog stores such values with a warning, and they
#: must stay reachable by queries.
DEMO_DESCRIPTION: dict[str, dict[str, str]] = {
    "FaceCutting": {"Sex": "Male", "Shape": "Oval", "HairDensity": "Normal"},
    "RightEyebrow": {
        "Length": "Large",
        "Width": "Normal",
        "Shape": "Elliptic",
        "Hair": "HighlyDense",
    },
    "RightEye": {"Length": "Normal", "Width": "Normal", "Shape": "Elliptic"},
    "LeftEyebrow": {
        "Length": "Large",
        "Width": "Normal",
        "Shape": "Elliptic",
        "Hair": "HighlyDense",
    },
    "LeftEye": {"Length": "Normal", "Width": "Normal", "Shape": "Elliptic"},
    "Nose": {"Sharpness": "Normal", "Length": "Normal", "Width": "Normal"},
    "Lip": {"Length": "Normal", "Width": "Normal", "Shape": CANT_SAY},
}


def build_demo_catalog() -> Catalog:
    """Seed a catalog that answers DEMO_DESCRIPTION for every kind.

    Each kind gets one record matching the demo description exactly plus
    extra records with different parameters, so queries genuinely filter.
    """
    catalog = Catalog()
    face = synthetic_face_cutting()
    face_params = [
        {"Sex": "Male", "Shape": "Oval", "HairDensity": "Normal"},
        {"Sex": "Female", "Shape": "Round", "HairDensity": "HighlyDense"},
        {"Sex": "Male", "Shape": "Round", "HairDensity": "LowDense"},
    ]
    for params in face_params:
        catalog.ingest(ComponentKind.FACE_CUTTING, params, face, source="synthetic")

    eyebrow_params = [
        {"Length": "Large", "Width": "Normal", "Shape": "Elliptic", "Hair": "HighlyDense"},
        {"Length": "Small", "Width": "Small", "Shape": "Flat", "Hair": "Normal"},
        {"Length": "Normal", "Width": "Normal", "Shape": "Wavy", "Hair": "LowDense"},
    ]
    eye_params = [
        {"Length": "Normal", "Width": "Normal", "Shape": "Elliptic"},
        {"Length": "Large", "Width": "Large", "Shape": "Round"},
    ]
    nose_params = [
        {"Sharpness": "Normal", "Length": "Normal", "Width": "Normal"},
        {"Sharpness": "Sharp", "Length": "Small", "Width": "Small"},
    ]
    lip_params = [
        {"Length": "Normal", "Width": "Normal", "Shape": "Linear"},
        {"Length": "Wide", "Width": "Thick", "Shape": "Wavy"},
    ]
    per_kind = {
        ComponentKind.RIGHT_EYEBROW: eyebrow_params,
        ComponentKind.LEFT_EYEBROW: eyebrow_params,
        ComponentKind.RIGHT_EYE: eye_params,
        ComponentKind.LEFT_EYE: eye_params,
        ComponentKind.NOSE: nose_params,
        ComponentKind.LIP: lip_params,
    }
    for kind, param_sets in per_kind.items():
        image, mask = synthetic_component(kind)
        for params in param_sets:
            catalog.ingest(kind, params, image, mask, source="synthetic")
    return catalog
