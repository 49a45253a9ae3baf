import numpy as np
import pytest

from photofit.image import BinaryMask, GrayImage

SEED = 20260823


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_image(rng, w, h) -> GrayImage:
    return GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))


def random_mask(rng, w, h) -> BinaryMask:
    return BinaryMask(rng.integers(0, 2, size=(h, w), dtype=np.uint8))


@pytest.fixture
def demo_catalog():
    from photofit.fixtures import build_demo_catalog

    return build_demo_catalog()
