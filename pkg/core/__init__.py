"""Settings, presets, logging and the error hierarchy shared by every study."""
