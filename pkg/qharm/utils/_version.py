# edit this file to control app name and version

program_name = "qharm"
__version__ = "0.2.0"
