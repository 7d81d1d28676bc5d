from .od import (ODMatrix, calibrate_total, apportion_largest_remainder, round_half_up, load_od_matrix,
                 write_od_matrix)
from .profiles import TemporalProfile, ProfileName, builtin_profile, load_profile, write_profile, resolve_profile
from .trips import (Trip, TripMode, TripTable, generate_trips, sorted_table, draw_departures, write_trip_table,
                    load_trip_table, trips_to_frame)
from .transit_legs import StopPair, StopPairAssigner, assign_stop_pairs
