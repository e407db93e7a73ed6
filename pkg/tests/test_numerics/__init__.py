"""Tests for linear algebra primitives"""
