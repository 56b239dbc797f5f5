"""Exception hierarchy. Input validation errors subclass ValueError so that callers catching ValueError keep working"""

class VibclustError(Exception):
    """Base class of every error raised by vibclust"""

class InvalidParameterError(VibclustError, ValueError):
    """A precondition of a numeric operation was violated (empty input, bad window size, k out of range...)"""

class DatasetError(VibclustError, ValueError):
    """Base class of data ingestion failures"""

class DatasetFileNotFoundError(DatasetError, FileNotFoundError):
    """The csv file declared in the manifest does not exist"""
    def __init__(self, path : str):
        super().__init__("Dataset file not found: %s" % path)
        self.path = path

class MissingColumnError(DatasetError):
    """A column declared in the manifest is missing from the csv header"""
    def __init__(self, path : str, columns : list):
        super().__init__("Missing column(s) %s in %s" % (", ".join(columns), path))
        self.path = path
        self.columns = columns

class NonNumericCellError(DatasetError):
    """A channel or label cell could not be parsed as a number"""
    def __init__(self, path : str, column : str, row : int, value):
        super().__init__("Non-numeric cell in %s, column %s, row %i: %r" % (path, column, row, value))
        self.path = path
        self.column = column
        self.row = row

class LabelOutOfRangeError(DatasetError):
    """Labels are not integral or there are more distinct labels than declared classes"""

class EmptyDatasetError(DatasetError):
    """No window survived cutting and filtering"""

class FeatureMismatchError(VibclustError, ValueError):
    """Feature matrices can't be combined (window count or labels differ)"""

class DimensionMismatchError(VibclustError, ValueError):
    """Feature count does not match the fitted model"""

class MissingBaselineError(VibclustError):
    """Experiments q2 to q5 need the q1 results of the output directory"""
