# -*- coding: utf-8 -*-
"""
Created the 14/10/2026

Arithmetic models: mode-shift scenarios, fleet constant derivation and CO2 emissions
"""
from .mode_shift import (FleetParams, BaselineStats, derive_baseline, ScenarioSpec, DEFAULT_SCENARIOS,
                         ScenarioResult, apply_scenario, scenario_suite, scenario_table_rows)
from .emissions import (EmissionCoefficients, default_coefficients, EmissionLedger, integrate, DailySeries,
                        smooth, series_from_values, aggregate, ReductionReport, compare)
from .derivation import derivation_report, check_fleet_defaults
