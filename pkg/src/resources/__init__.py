# Empty file to denote package
