# -*- coding: utf-8 -*-
"""
Created the 12/10/2026

Exceptions raised across the package. Every one of them derives from TransitModeShiftError
so the command line can tell a domain failure from a programming error.
"""


class TransitModeShiftError(Exception):
    pass


class FeedIncompleteError(TransitModeShiftError):
    def __init__(self, file_name: str):
        super().__init__(f'GTFS feed is missing the required file {file_name}')
        self.file_name = file_name


class ReferentialIntegrityError(TransitModeShiftError):
    def __init__(self, identifier: str, message: str = ''):
        super().__init__(message or f'unresolved reference {identifier!r}')
        self.identifier = identifier


class UnsupportedFeatureError(TransitModeShiftError):
    pass


class FeedFormatError(TransitModeShiftError):
    pass


class ServiceDateError(TransitModeShiftError):
    pass


class UnknownRouteError(TransitModeShiftError):
    pass


class NotServedError(TransitModeShiftError):
    pass


class NetworkFormatError(TransitModeShiftError):
    def __init__(self, field: str, message: str):
        super().__init__(f'{field}: {message}')
        self.field = field


class NetworkDomainError(TransitModeShiftError):
    pass


class NoPathError(TransitModeShiftError):
    pass


class DegenerateDemandError(TransitModeShiftError):
    pass


class UnknownProfileError(TransitModeShiftError):
    pass


class InfeasibleBaselineError(TransitModeShiftError):
    pass


class OverCapacityError(TransitModeShiftError):
    pass


class DemandExhaustedError(TransitModeShiftError):
    pass


class ScenarioError(TransitModeShiftError):
    pass


class SimConfigurationError(TransitModeShiftError):
    pass


class EmptySeriesError(TransitModeShiftError):
    pass


class IncompatibleSeriesError(TransitModeShiftError):
    pass


class PipelineStageError(TransitModeShiftError):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f'stage {stage!r} failed: {error}')
        self.stage = stage
        self.error = error


class PipelineConfigError(TransitModeShiftError):
    pass
