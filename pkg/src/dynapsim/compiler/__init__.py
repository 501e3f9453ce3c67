from .emit import emit_images
from .layout import NeuronSite, Placement, Stimulus, routing_word
from .netlist import NetworkSpec, Population, load_netlist, netlist_source
from .placement import cluster, place
from .tags import allocate_tags, tag_collisions
from .validate import ValidationReport, validate
