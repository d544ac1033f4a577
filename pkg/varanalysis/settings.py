"""
Django settings for the varanalysis project.

The project hosts the ``infconv`` app: a numerical toolkit for infimal
convolutions, Moreau envelopes, gauges, minimal time functions and
subdifferentials on 1D/2D grids, plus the check harness and CLI.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-varanalysis-local-only')

DEBUG = os.environ.get('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'infconv',
]


# Database
# Stored check runs go to DATABASE_URL when set, sqlite otherwise.

if os.environ.get('DATABASE_URL'):
    import dj_database_url
    DATABASES = {
        'default': dj_database_url.parse(os.environ.get('DATABASE_URL'))
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'db.sqlite3',
        }
    }


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value else default


# Envelope toolkit configuration
INFCONV = {
    'GRID_POINT_CAP': _env_int('INFCONV_GRID_POINT_CAP', 2 ** 24),
    'BRUTE_FORCE_BUDGET': _env_int('INFCONV_BRUTE_FORCE_BUDGET', 2 ** 33),
    'DEFAULT_SEED': _env_int('INFCONV_SEED', 0),
    'SET_TOLERANCE': 1e-9,
    'ACTIVE_TOLERANCE': 1e-12,
    'CERTIFICATE_RADII': (8, 4, 2, 1),
    'CERTIFICATE_SLACK': 10.0,
    'PROBE_TOLERANCE_FACTOR': 20.0,
    'LSC_SLOPE': 10.0,
    'TOLERANCES': {
        'argmin': 1e-9,
        'hausdorff': 1e-6,
        'membership': 1e-8,
        'lipschitz': 1e-9,
        'segment': 1e-8,
        'fd_gradient': 1e-4,
        'transfer_eta': 0.1,
        'amp_epsilon': 0.05,
        'c1_constant': 4.0,
    },
}


# Logging Configuration
# Diagnostics go to stderr; data written by commands goes to files or stdout.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': os.environ.get('INFCONV_LOG_LEVEL', 'WARNING'),
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'infconv': {
            'handlers': ['console'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}

if os.environ.get('INFCONV_LOG_FILE'):
    LOGGING['handlers']['file'] = {
        'level': 'INFO',
        'class': 'logging.FileHandler',
        'filename': os.environ['INFCONV_LOG_FILE'],
        'formatter': 'verbose',
    }
    LOGGING['loggers']['infconv']['handlers'].append('file')
