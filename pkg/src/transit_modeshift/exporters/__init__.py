from .tables import (write_frame, write_json, segments_frame, bus_kpis_frame, waits_frame, write_sim_output,
                     write_ledger, write_series, load_series, series_plot_frame, scenario_table_frame,
                     write_scenario_table)
from .chart import plot_series
