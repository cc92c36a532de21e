# Notations package
