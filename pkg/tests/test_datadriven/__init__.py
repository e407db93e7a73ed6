"""Tests for data-driven identification"""
