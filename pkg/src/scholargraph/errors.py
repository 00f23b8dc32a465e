"""Exception types shared across the package."""


class ScholarGraphError(Exception):
    """Base class for every domain error raised by this package."""


# graph store

class DuplicateIdError(ScholarGraphError):
    pass


class DuplicateEdgeError(ScholarGraphError):
    pass


class UnknownPropertyKeyError(ScholarGraphError):
    pass


class InvalidPropertyValueError(ScholarGraphError):
    pass


class MissingEndpointError(ScholarGraphError):
    pass


class SchemaViolationError(ScholarGraphError):
    pass


class InvalidScoreError(ScholarGraphError):
    pass


class UnknownNodeError(ScholarGraphError):
    pass


# taxonomy

class CycleDetectedError(ScholarGraphError):
    """Raised with one witness cycle (list of concept ids, first == last)."""

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__(f"cycle in taxonomy: {' -> '.join(cycle)}")


class DanglingParentError(ScholarGraphError):
    pass


class UnknownConceptError(ScholarGraphError):
    pass


class LevelOutOfRangeError(ScholarGraphError):
    pass


# text semantics / classification

class EmptyVocabularyError(ScholarGraphError):
    pass


class EmptyTitleError(ScholarGraphError):
    pass


class EmptyTaxonomyError(ScholarGraphError):
    pass


# inference

class CyclicOrgStructureError(ScholarGraphError):
    pass


# analytics

class InvalidYearRangeError(ScholarGraphError):
    pass


class TooFewYearsError(ScholarGraphError):
    pass


# ingest / persistence

class TaxonomyInvalidError(ScholarGraphError):
    pass


class FileUnreadableError(ScholarGraphError):
    pass


class SnapshotIoError(ScholarGraphError):
    pass


class CorruptSnapshotError(ScholarGraphError):
    pass


# serving

class SnapshotMissingError(ScholarGraphError):
    pass


class BindFailureError(ScholarGraphError):
    pass
