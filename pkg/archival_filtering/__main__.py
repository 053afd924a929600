# archival_filtering/__main__.py
from archival_filtering.main import cli

if __name__ == "__main__":
    cli()
