""" This is the entry point of the application. """

# pylint: disable=C0413

from os import getenv

from dotenv import load_dotenv, find_dotenv

load_dotenv(find_dotenv())

from tfkt import create_app
from tfkt.config.development_config import DevelopmentConfig
from tfkt.config.production import ProductionConfig

ENVIRONMENT = getenv("ENVIRONMENT", "")

app = create_app(ProductionConfig if ENVIRONMENT == "production" else DevelopmentConfig)

if __name__ == "__main__":
    app()  # pylint: disable=no-value-for-parameter
