from kl_emulator.models.emulator import KLEmulator

__all__ = ["KLEmulator"]
