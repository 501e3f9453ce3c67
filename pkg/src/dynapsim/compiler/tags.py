import logging
from typing import Dict, Mapping, Sequence, Set

from .layout import CoreKey, TagMap
from ..errors import TagExhaustionError

logger = logging.getLogger(__name__)

TAGS_PER_CORE = 1 << 10


def allocate_tags(
    targets: Mapping[int, Sequence[CoreKey]], tags: int = TAGS_PER_CORE
) -> TagMap:
    """Greedy colouring of (source, destination core) pairs.

    Pairs that share a destination core conflict, so every source
    projecting into a core gets its own tag there. Sources are visited in
    index order and take the lowest free tag; the same tag is reused
    freely in other cores.
    """
    # Tags are never released, so the next free tag per core is a counter.
    next_tag: Dict[CoreKey, int] = {}
    tag_map: TagMap = {}
    for source in sorted(targets):
        assigned = tag_map.setdefault(source, {})
        for key in targets[source]:
            if key in assigned:
                continue
            tag = next_tag.get(key, 0)
            if tag >= tags:
                sources = sum(key in cores for cores in targets.values())
                raise TagExhaustionError(key[0], key[1], sources)
            next_tag[key] = tag + 1
            assigned[key] = tag
    for key, count in sorted(next_tag.items()):
        logger.debug("chip %d core %d: %d tags", key[0], key[1], count)
    return tag_map


def tag_collisions(tag_map: TagMap) -> Dict[CoreKey, Set[int]]:
    """Tags shared by two or more sources within one destination core."""
    owners: Dict[CoreKey, Dict[int, int]] = {}
    collisions: Dict[CoreKey, Set[int]] = {}
    for source, cores in tag_map.items():
        for key, tag in cores.items():
            seen = owners.setdefault(key, {})
            if tag in seen and seen[tag] != source:
                collisions.setdefault(key, set()).add(tag)
            seen[tag] = source
    return collisions
