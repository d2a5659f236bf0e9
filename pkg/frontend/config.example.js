// Copy to config.js to point the UI at a service on another origin.
window.ELECTWIN_API_BASE = "http://127.0.0.1:8000";
