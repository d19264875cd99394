# Plangen source package
