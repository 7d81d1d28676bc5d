# -*- coding: utf-8 -*-
"""
Created the 16/10/2026

Mesoscopic day simulation and scenario trip tables
"""
from .meso import (VehicleClassId, VehicleClass, default_vehicle_classes, SimParams, TrajectorySegment,
                   StopVisit, PassengerWait, BusKpi, SimOutput, MesoSimulator, run_day)
from .shift import apply_modeshift_to_trips
