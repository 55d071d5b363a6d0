import sys

def error_message_detail(error, error_detail: sys = sys):
    """
    Extract detailed error information
    """
    _, _, exc_tb = error_detail.exc_info()
    if exc_tb is not None:
        file_name = exc_tb.tb_frame.f_code.co_filename
        line_number = exc_tb.tb_lineno
    else:
        # raised directly rather than re-raised from an except block
        frame = sys._getframe(2)
        file_name = frame.f_code.co_filename
        line_number = frame.f_lineno

    error_message = f"Error occurred in python script name [{file_name}] line number [{line_number}] error message [{str(error)}]"

    return error_message

class CustomException(Exception):
    """
    Custom Exception class for kancalc
    """
    def __init__(self, error_message, error_detail: sys = sys):
        super().__init__(error_message)
        self.message = str(error_message)
        self.error_message = error_message_detail(error_message, error_detail=error_detail)

    def __str__(self):
        return self.message

    def detailed(self) -> str:
        return self.error_message

# Category validation
class CategoryValidationException(CustomException):
    """Exception raised when a composition table breaks a category law"""
    pass

class MissingComposite(CategoryValidationException):
    """A composable pair has no entry in the composition table"""
    pass

class AssociativityViolation(CategoryValidationException):
    """h(gf) differs from (hg)f for some composable triple"""
    pass

class IdentityViolation(CategoryValidationException):
    """An identity law fails"""
    pass

class DanglingEndpoint(CategoryValidationException):
    """A morphism or composite refers to endpoints that do not fit"""
    pass

class FunctorValidationException(CustomException):
    """Exception raised when a map of categories is not a functor"""
    pass

class NaturalityException(CustomException):
    """Exception raised when a family of components is not natural"""
    pass

class VarianceMismatch(CustomException):
    """Exception raised when a Set-valued functor has the wrong variance or base"""
    pass

# Order theory
class PosetValidationException(CustomException):
    """Exception raised for malformed partial orders"""
    pass

class AntisymmetryViolation(PosetValidationException):
    """Two distinct elements are below each other"""
    pass

class NonMonotoneLambda(PosetValidationException):
    """A gluing map is not monotone"""
    pass

# Decision procedures
class PreconditionFailed(CustomException):
    """Exception raised when a lemma harness is called outside its hypotheses"""
    pass

class BoundExceeded(CustomException):
    """Exception raised when an enumeration outgrows its budget"""
    pass

# Input
class ParseError(CustomException):
    """Exception raised for malformed text input"""
    def __init__(self, error_message, line: int = 0, column: int = 0, error_detail: sys = sys):
        super().__init__(f"line {line}, column {column}: {error_message}", error_detail)
        self.line = line
        self.column = column

class ValidationError(CustomException):
    """Exception raised when a loaded entity fails its module validator"""
    pass

# Configuration Exceptions
class ConfigurationException(CustomException):
    """Exception raised for configuration errors"""
    pass

# File Operation Exceptions
class FileOperationException(CustomException):
    """Exception raised for file operation errors"""
    pass
