class ExtractorError(Exception):
    """Base for everything this package raises on purpose."""


class UnknownBackboneError(ExtractorError):
    pass


class UndecodableImageError(ExtractorError):
    pass


class MissingImageError(ExtractorError):
    """A label row names an image file that is not in the directory."""


class MissingLabelError(ExtractorError):
    """An image file in the directory has no label row."""


class LabelFormatError(ExtractorError):
    pass


class FeatureWidthError(ExtractorError):
    """A built backbone's pooled width disagrees with the documented one."""


class WeightsUnavailableError(ExtractorError):
    pass
