from qharm.utils._version import __version__, program_name
