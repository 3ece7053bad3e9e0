import pytest

from polyboard.layout import CharacterInventory, page_centers
from polyboard.profiles import LanguageProfile, bundled_layouts, bundled_profiles
from polyboard.decoder import SpatialModel, TapEvent

LOWER = "abcdefghijklmnopqrstuvwxyz"


@pytest.fixture(scope="session")
def profiles():
    return bundled_profiles()


@pytest.fixture(scope="session")
def layouts():
    return bundled_layouts()


@pytest.fixture(scope="session")
def en_profile(profiles):
    return profiles["en"]


@pytest.fixture(scope="session")
def en_layout(layouts):
    return layouts["en_qwerty"]


@pytest.fixture(scope="session")
def en_spatial(en_layout):
    return SpatialModel(en_layout)


@pytest.fixture(scope="session")
def en_centers(en_layout):
    return page_centers(en_layout)


@pytest.fixture(scope="session")
def taps_for(en_centers):
    def make(word, noise=None, rng=None, t0=0):
        taps = []
        for i, ch in enumerate(word):
            x, y = en_centers[ch]
            if noise and rng:
                x = min(1.0, max(0.0, x + rng.gauss(0.0, noise)))
                y = min(1.0, max(0.0, y + rng.gauss(0.0, noise)))
            taps.append(TapEvent(x=x, y=y, timestamp=t0 + i))
        return taps

    return make


@pytest.fixture
def plain_inventory():
    return CharacterInventory("en", frozenset(LOWER))


def make_profile(tag="xx", letters=LOWER, extra=(), **kwargs):
    inv = CharacterInventory(
        tag,
        frozenset(letters) | frozenset(extra)
        | frozenset(c.upper() for c in letters if c.upper() != c),
    )
    defaults = dict(
        language_tag=tag,
        name=tag,
        autonym=tag,
        scripts=(("Latn", "everyday"),),
        inventory=inv,
        casing="cased",
    )
    defaults.update(kwargs)
    return LanguageProfile(**defaults)
