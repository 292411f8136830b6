from flask import Flask


app: Flask = Flask(__name__)

app.config.from_mapping(
    {
        "CACHE_TYPE": "SimpleCache",
        "CACHE_DEFAULT_TIMEOUT": 300,
        # traced oval sets hold a few thousand vertices each
        "CACHE_THRESHOLD": 256,
        "JSON_SORT_KEYS": False,
    }
)
