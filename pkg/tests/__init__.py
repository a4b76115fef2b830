"""Test suite for molcomm-atv."""
