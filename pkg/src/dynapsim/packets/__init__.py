from .words import (
    SynType,
    RoutingWord,
    CamEntry,
    Packet,
    encode_routing_word,
    decode_routing_word,
    encode_cam_entry,
    decode_cam_entry,
)
from .image import MemoryImage, SlotAddress, load_image, image_text
