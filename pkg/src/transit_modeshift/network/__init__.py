from .graph import Edge, Zone, NetworkGraph, load_network, write_network, network_from_dict, network_to_dict
from .routing import Router, shortest_path, path_cost
