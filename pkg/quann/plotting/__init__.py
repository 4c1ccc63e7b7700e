from .pgm import encode_pgm, read_pgm, save_recurrence_pgm

__all__ = ["encode_pgm", "read_pgm", "save_recurrence_pgm"]
