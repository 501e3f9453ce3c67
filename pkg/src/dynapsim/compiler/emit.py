from .layout import Placement
from ..packets.image import MemoryImage, SlotAddress


def emit_images(p: Placement) -> MemoryImage:
    """Programs every SRAM routing word and CAM entry of a placement."""
    image = MemoryImage()
    for source, words in p.routes().items():
        site = p.sites[source]
        for slot, word in enumerate(words):
            image.write_sram(
                SlotAddress(site.chip, site.core, site.index, slot), word
            )
    for (chip, core), neurons in p.cam.items():
        for index, entries in neurons.items():
            for slot, entry in enumerate(entries):
                image.write_cam(SlotAddress(chip, core, index, slot), entry)
    return image
