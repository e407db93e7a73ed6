"""Tests for experiments and tables"""
