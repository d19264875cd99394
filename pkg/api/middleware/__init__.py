# API middleware package
