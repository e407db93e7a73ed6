"""Tests for plants, references and episodes"""
