"""Tests for the controllers and the closed loop"""
