from .gtfs import (Stop, RouteDef, RouteType, StopEvent, BusRunTemplate, TransitSchedule, parse_feed,
                   runs_in_window, headways, served_stops, stop_patterns, schedule_summary)
