import pytest

from fstagger.hmm import make_params
from fstagger.inventory import Inventory


@pytest.fixture(scope="session")
def toy3_inventory():
    return Inventory.build(
        ["DET", "ADJ", "NOUN"],
        [("[DET]", ["DET"]), ("[ADJ,NOUN]", ["ADJ", "NOUN"]), ("[NOUN]", ["NOUN"])],
    )


@pytest.fixture(scope="session")
def toy3_params(toy3_inventory):
    # chosen so the extended middle [DET][ADJ,NOUN][ADJ,NOUN][NOUN] decodes
    # to DET ADJ ADJ NOUN
    return make_params(
        toy3_inventory,
        pi={"DET": 0.7, "ADJ": 0.2, "NOUN": 0.1},
        a={
            ("DET", "DET"): 0.1, ("DET", "ADJ"): 0.6, ("DET", "NOUN"): 0.3,
            ("ADJ", "DET"): 0.1, ("ADJ", "ADJ"): 0.4, ("ADJ", "NOUN"): 0.5,
            ("NOUN", "DET"): 0.4, ("NOUN", "ADJ"): 0.3, ("NOUN", "NOUN"): 0.3,
        },
        b={
            ("[DET]", "DET"): 1.0,
            ("[ADJ,NOUN]", "ADJ"): 1.0,
            ("[ADJ,NOUN]", "NOUN"): 0.5,
            ("[NOUN]", "NOUN"): 0.5,
        },
        sentence_end="[NOUN]",
    )
