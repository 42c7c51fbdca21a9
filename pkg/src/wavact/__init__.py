"""Wavelet-based activity models, entropy streams and anomaly detection for binary smart-home sensors."""

__version__ = "0.1.0"
