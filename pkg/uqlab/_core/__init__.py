# -*- coding: utf-8 -*-
"""
Core calculation modules
"""
