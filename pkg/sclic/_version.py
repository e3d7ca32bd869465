__version__ = 'unknown'
__timestamp__ = 'unknown'
