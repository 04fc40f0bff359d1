from .commands import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main

__all__ = ['EXIT_OK', 'EXIT_FAILED', 'EXIT_USAGE', 'build_parser', 'main']
