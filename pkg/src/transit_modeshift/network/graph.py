# -*- coding: utf-8 -*-
"""
Created the 13/10/2026

Road graph and traffic analysis zones, loaded from the JSON network interchange file:

    {"nodes": [{"id": ...}],
     "edges": [{"id", "from", "to", "length_m", "free_speed_mps", "lanes", "capacity_vph" (optional)}],
     "zones": [{"id", "edges": [...]}]}
"""
import json
from dataclasses import dataclass, field
from functools import cached_property
from numbers import Real
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import config
from transit_modeshift.errors import NetworkFormatError, NetworkDomainError, ReferentialIntegrityError

logger = set_logger(get_module_name(__file__))


@dataclass(frozen=True)
class Edge:
    """ Directed road link. capacity defaults to lanes x the configured lane capacity (veh/h)"""
    edge_id: str
    from_node: str
    to_node: str
    length: float
    free_speed: float
    lanes: int = 1
    capacity: Optional[float] = None

    def __post_init__(self):
        if self.capacity is None:
            object.__setattr__(self, 'capacity', float(config('network', 'lane_capacity_vph')) * self.lanes)
        if not self.length > 0:
            raise NetworkDomainError(f'edge {self.edge_id}: length must be > 0, got {self.length}')
        if not self.free_speed > 0:
            raise NetworkDomainError(f'edge {self.edge_id}: free speed must be > 0, got {self.free_speed}')
        if not (isinstance(self.lanes, int) and self.lanes > 0):
            raise NetworkDomainError(f'edge {self.edge_id}: lanes must be a positive integer, got {self.lanes}')
        if not self.capacity > 0:
            raise NetworkDomainError(f'edge {self.edge_id}: capacity must be > 0, got {self.capacity}')

    @property
    def free_flow_time(self) -> float:
        return self.length / self.free_speed


@dataclass(frozen=True)
class Zone:
    zone_id: str
    edge_ids: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'edge_ids', tuple(sorted(set(self.edge_ids))))


@dataclass(frozen=True)
class NetworkGraph:
    """ Immutable road graph. Collections are kept sorted by identifier so that permuted input files
    give equal graphs"""
    nodes: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    zones: Tuple[Zone, ...] = ()
    _edges_by_id: Dict[str, Edge] = field(init=False, repr=False, compare=False)
    _zones_by_id: Dict[str, Zone] = field(init=False, repr=False, compare=False)
    _successors: Dict[str, Tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(sorted(self.nodes)))
        object.__setattr__(self, 'edges', tuple(sorted(self.edges, key=lambda edge: edge.edge_id)))
        object.__setattr__(self, 'zones', tuple(sorted(self.zones, key=lambda zone: zone.zone_id)))
        for kind, ids in (('node', self.nodes), ('edge', [edge.edge_id for edge in self.edges]),
                          ('zone', [zone.zone_id for zone in self.zones])):
            duplicated = sorted({ident for ident in ids if ids.count(ident) > 1}) if len(set(ids)) != len(ids) \
                else []
            if duplicated:
                raise NetworkFormatError(f'{kind}s', f'duplicated identifier {duplicated[0]!r}')
        node_set = set(self.nodes)
        for edge in self.edges:
            for node in (edge.from_node, edge.to_node):
                if node not in node_set:
                    raise ReferentialIntegrityError(node, f'edge {edge.edge_id} references unknown node {node!r}')
        edges_by_id = {edge.edge_id: edge for edge in self.edges}
        for zone in self.zones:
            for edge_id in zone.edge_ids:
                if edge_id not in edges_by_id:
                    raise ReferentialIntegrityError(edge_id, f'zone {zone.zone_id} references unknown edge '
                                                             f'{edge_id!r}')
        outgoing: Dict[str, List[str]] = {}
        for edge in self.edges:
            outgoing.setdefault(edge.from_node, []).append(edge.edge_id)
        object.__setattr__(self, '_edges_by_id', edges_by_id)
        object.__setattr__(self, '_zones_by_id', {zone.zone_id: zone for zone in self.zones})
        object.__setattr__(self, '_successors',
                           {edge.edge_id: tuple(outgoing.get(edge.to_node, ())) for edge in self.edges})

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges_by_id[edge_id]
        except KeyError:
            raise ReferentialIntegrityError(edge_id, f'unknown edge {edge_id!r}')

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edges_by_id

    def zone(self, zone_id: str) -> Zone:
        try:
            return self._zones_by_id[zone_id]
        except KeyError:
            raise ReferentialIntegrityError(zone_id, f'unknown zone {zone_id!r}')

    def has_zone(self, zone_id: str) -> bool:
        return zone_id in self._zones_by_id

    def successors(self, edge_id: str) -> Tuple[str, ...]:
        return self._successors[edge_id]

    @cached_property
    def router(self):
        from transit_modeshift.network.routing import Router
        return Router(self)


def _require(record: dict, key: str, where: str, kind):
    if key not in record:
        raise NetworkFormatError(f'{where}.{key}', 'missing field')
    value = record[key]
    if kind is Real:
        if isinstance(value, bool) or not isinstance(value, Real):
            raise NetworkFormatError(f'{where}.{key}', f'expected a number, got {value!r}')
    elif kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise NetworkFormatError(f'{where}.{key}', f'expected an integer, got {value!r}')
    elif not isinstance(value, kind):
        raise NetworkFormatError(f'{where}.{key}', f'expected {kind.__name__}, got {value!r}')
    return value


def _records(document: dict, key: str) -> list:
    if key not in document:
        raise NetworkFormatError(key, 'missing top-level array')
    records = document[key]
    if not isinstance(records, list):
        raise NetworkFormatError(key, 'expected an array')
    for ind, record in enumerate(records):
        if not isinstance(record, dict):
            raise NetworkFormatError(f'{key}[{ind}]', 'expected an object')
    return records


def network_from_dict(document: dict) -> NetworkGraph:
    if not isinstance(document, dict):
        raise NetworkFormatError('<root>', 'expected a JSON object')
    nodes = tuple(_require(record, 'id', f'nodes[{ind}]', str)
                  for ind, record in enumerate(_records(document, 'nodes')))
    edges = []
    for ind, record in enumerate(_records(document, 'edges')):
        where = f'edges[{ind}]'
        capacity = None
        if record.get('capacity_vph') is not None:
            capacity = float(_require(record, 'capacity_vph', where, Real))
        edges.append(Edge(edge_id=_require(record, 'id', where, str),
                          from_node=_require(record, 'from', where, str),
                          to_node=_require(record, 'to', where, str),
                          length=float(_require(record, 'length_m', where, Real)),
                          free_speed=float(_require(record, 'free_speed_mps', where, Real)),
                          lanes=_require(record, 'lanes', where, int),
                          capacity=capacity))
    zones = []
    for ind, record in enumerate(_records(document, 'zones')):
        where = f'zones[{ind}]'
        zone_id = _require(record, 'id', where, str)
        edge_ids = _require(record, 'edges', where, list)
        if not edge_ids:
            raise ReferentialIntegrityError(zone_id, f'zone {zone_id} has an empty edge set')
        for edge_ind, edge_id in enumerate(edge_ids):
            if not isinstance(edge_id, str):
                raise NetworkFormatError(f'{where}.edges[{edge_ind}]', f'expected an edge id, got {edge_id!r}')
        zones.append(Zone(zone_id, tuple(edge_ids)))
    return NetworkGraph(nodes, tuple(edges), tuple(zones))


def load_network(file: Union[str, Path]) -> NetworkGraph:
    """ Load and validate a network interchange file

    Raises
    ------
    NetworkFormatError: malformed JSON (with its line) or a schema violation (with its field path)
    ReferentialIntegrityError: dangling node or zone edge reference
    NetworkDomainError: non-positive length, speed, lanes or capacity
    """
    text = Path(file).read_text(encoding='utf-8')
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(f'line {e.lineno}', e.msg)
    graph = network_from_dict(document)
    logger.info(f'network {file} loaded: {len(graph.nodes)} nodes, {len(graph.edges)} edges, '
                f'{len(graph.zones)} zones')
    return graph


def network_to_dict(graph: NetworkGraph) -> dict:
    return dict(nodes=[dict(id=node) for node in graph.nodes],
                edges=[{'id': edge.edge_id, 'from': edge.from_node, 'to': edge.to_node, 'length_m': edge.length,
                        'free_speed_mps': edge.free_speed, 'lanes': edge.lanes, 'capacity_vph': edge.capacity}
                       for edge in graph.edges],
                zones=[dict(id=zone.zone_id, edges=list(zone.edge_ids)) for zone in graph.zones])


def write_network(graph: NetworkGraph, file: Union[str, Path]):
    Path(file).write_text(json.dumps(network_to_dict(graph), indent=1), encoding='utf-8')
