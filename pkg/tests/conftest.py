import pytest

from medbuild.layout import SitePolygon
from medbuild.program import load_default_config


def rect_site(width_mm, height_mm):
    return SitePolygon(vertices=(
        (0.0, 0.0), (float(width_mm), 0.0),
        (float(width_mm), float(height_mm)), (0.0, float(height_mm))))


# five site shapes used by the layout suites: two rectangles, a pentagon,
# an L-shape and a diamond
SITES = {
    "rect_wide": rect_site(200000, 150000),
    "rect_tight": rect_site(120000, 90000),
    "pentagon": SitePolygon(vertices=(
        (0.0, 0.0), (180000.0, 0.0), (220000.0, 90000.0),
        (110000.0, 170000.0), (0.0, 90000.0))),
    "l_shape": SitePolygon(vertices=(
        (0.0, 0.0), (200000.0, 0.0), (200000.0, 80000.0),
        (100000.0, 80000.0), (100000.0, 180000.0), (0.0, 180000.0))),
    "diamond": SitePolygon(vertices=(
        (110000.0, 0.0), (220000.0, 90000.0),
        (110000.0, 180000.0), (0.0, 90000.0))),
}


@pytest.fixture(scope="session")
def config():
    return load_default_config()
