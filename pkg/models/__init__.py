from .reports import CheckRecord, VerificationReport, value_text

__all__ = ['CheckRecord', 'VerificationReport', 'value_text']
