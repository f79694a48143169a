"""WSGI config for periodica project."""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "periodica.settings")

application = get_wsgi_application()
